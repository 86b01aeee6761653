import csv
import logging
from collections.abc import Iterable, Iterator
from datetime import datetime

from fino_callnet.domain.error import ParseError
from fino_callnet.domain.value.cdr_record import CdrRecord, parse_cdr_date
from fino_callnet.domain.value.ingest_stats import IngestStats
from fino_callnet.interface.config.ingest import IngestConfig
from fino_callnet.interface.port.record_source import CdrBatch

logger = logging.getLogger(__name__)

CDR_COLUMNS = ("start_date", "start_time", "duration", "from_id", "to_id")


def parse_cdr_fields(fields: list[str], row: int | None = None) -> CdrRecord:
    if len(fields) != len(CDR_COLUMNS):
        raise ParseError(f"expected {len(CDR_COLUMNS)} fields, got {len(fields)}", row=row)
    date_text, time_text, duration_text, from_id, to_id = (f.strip() for f in fields)
    try:
        start_date = parse_cdr_date(date_text)
    except ValueError as e:
        raise ParseError(str(e), row=row) from e
    try:
        start_time = datetime.strptime(time_text, "%H:%M:%S").time()
    except ValueError as e:
        raise ParseError(f"invalid time '{time_text}'", row=row) from e
    if not duration_text.isdigit():
        raise ParseError(f"non-numeric duration '{duration_text}'", row=row)
    try:
        return CdrRecord(
            start_date=start_date,
            start_time=start_time,
            duration=int(duration_text),
            from_id=from_id,
            to_id=to_id,
        )
    except ValueError as e:
        raise ParseError(str(e), row=row) from e


def parse_cdr_line(line: str, delimiter: str = ",", row: int | None = None) -> CdrRecord:
    """
    CDRログの1行をパースする

    Examples
    --------
    >>> parse_cdr_line("01MAY2017,14:51:14,715,(202) 555-0116,(701) 555-0191").duration
    715
    """
    fields = next(csv.reader([line.rstrip("\r\n")], delimiter=delimiter), [])
    return parse_cdr_fields(fields, row=row)


_HEADER_NAMES: tuple[frozenset[str], ...] = (
    frozenset({"start_date", "date"}),
    frozenset({"start_time", "time"}),
    frozenset({"duration", "duration_s", "seconds"}),
    frozenset({"from_id", "from", "caller"}),
    frozenset({"to_id", "to", "callee"}),
)


def _looks_like_header(fields: list[str]) -> bool:
    """列名と一致する行だけをヘッダーとみなす。それ以外はデータ行として検証する"""
    if len(fields) != len(_HEADER_NAMES):
        return False
    names = (f.strip().casefold().replace(" ", "_").replace("-", "_") for f in fields)
    return all(name in allowed for name, allowed in zip(names, _HEADER_NAMES, strict=True))


def ingest_cdr(lines: Iterable[str], config: IngestConfig | None = None) -> CdrBatch:
    """
    CDRログを読み込み、min_duration 秒未満の通話を除外する
    不正な行は棄却して行番号と理由を記録する（ヘッダー行は数えない）
    """
    config = config or IngestConfig()
    records: list[CdrRecord] = []
    rejections: list[str] = []
    rows_read = rows_rejected = rows_short = 0
    ids: set[str] = set()

    reader: Iterator[list[str]] = csv.reader(
        (line.rstrip("\r\n") for line in lines), delimiter=config.delimiter
    )
    for line_number, fields in enumerate(reader, start=1):
        if not fields or all(not f.strip() for f in fields):
            continue
        if line_number == 1 and (
            config.has_header or (config.has_header is None and _looks_like_header(fields))
        ):
            logger.debug("skipping CDR header: %s", fields)
            continue
        rows_read += 1
        try:
            record = parse_cdr_fields(fields, row=line_number)
        except ParseError as e:
            rows_rejected += 1
            rejections.append(str(e))
            logger.warning("rejected CDR %s", e)
            continue
        if record.duration < config.min_duration:
            rows_short += 1
            continue
        records.append(record)
        ids.add(record.from_id)
        ids.add(record.to_id)

    stats = IngestStats(
        rows_read=rows_read,
        rows_rejected=rows_rejected,
        rows_filtered_short=rows_short,
        distinct_ids=len(ids),
    )
    logger.info(
        "CDR ingest: %d read, %d accepted, %d rejected, %d shorter than %ds, %d distinct ids",
        stats.rows_read,
        stats.accepted,
        stats.rows_rejected,
        stats.rows_filtered_short,
        config.min_duration,
        stats.distinct_ids,
    )
    return CdrBatch(records=records, stats=stats, rejections=rejections)


def format_cdr_lines(records: Iterable[CdrRecord], delimiter: str = ",", header: bool = True) -> Iterator[str]:
    """ingest_cdr で読める形式の行を生成する"""
    if header:
        yield delimiter.join(CDR_COLUMNS)
    for record in records:
        yield record.to_line(delimiter)


class CsvCdrSource:
    def __init__(self, config: IngestConfig) -> None:
        self.config = config

    def read_cdr(self, lines: Iterable[str]) -> CdrBatch:
        return ingest_cdr(lines, self.config)
