from datetime import date, time

import pytest
from fino_callnet.domain.error import ParseError
from fino_callnet.domain.value.cdr_record import CdrRecord
from fino_callnet.infrastructure.adapter.record_source.csv_cdr import (
    CsvCdrSource,
    format_cdr_lines,
    ingest_cdr,
    parse_cdr_line,
)
from fino_callnet.infrastructure.factory.record_source import create_cdr_source
from fino_callnet.interface.config.ingest import IngestConfig


@pytest.mark.infrastructure
class TestParseCdrLine:
    def test_parse(self) -> None:
        record = parse_cdr_line("01MAY2017,14:51:14,715,(202) 555-0116,(701) 555-0191\n")
        assert record == CdrRecord(
            start_date=date(2017, 5, 1),
            start_time=time(14, 51, 14),
            duration=715,
            from_id="(202) 555-0116",
            to_id="(701) 555-0191",
        )

    def test_other_delimiter(self) -> None:
        record = parse_cdr_line("01MAY2017;14:51:14;715;a;b", delimiter=";")
        assert record.to_id == "b"

    @pytest.mark.parametrize(
        ("line", "message"),
        [
            ("32MAY2017,10:00:00,10,a,b", "row 7"),
            ("01MAY2017,25:00:00,10,a,b", "invalid time"),
            ("01MAY2017,10:00:00,ten,a,b", "non-numeric duration"),
            ("01MAY2017,10:00:00,-4,a,b", "non-numeric duration"),
            ("01MAY2017,10:00:00,10,a", "expected 5 fields"),
            ("01MAY2017,10:00:00,10,a,a", "Self-call"),
            ("01MAY2017,10:00:00,10,,b", "cannot be empty"),
        ],
    )
    def test_invalid(self, line: str, message: str) -> None:
        with pytest.raises(ParseError, match=message) as e:
            parse_cdr_line(line, row=7)
        assert e.value.row == 7


@pytest.mark.infrastructure
class TestIngestCdr:
    LINES = [
        "start_date,start_time,duration,from_id,to_id\n",
        "01MAY2017,14:51:14,715,(202) 555-0116,(701) 555-0191\n",
        "01MAY2017,14:52:00,3,a,b\n",
        "\n",
        "32MAY2017,10:00:00,10,a,b\n",
        "01MAY2017,10:00:00,ten,a,b\n",
        "02MAY2017,09:00:00,5,(701) 555-0191,c\n",
    ]

    def test_counts(self) -> None:
        batch = ingest_cdr(self.LINES)
        assert batch.stats.rows_read == 5
        assert batch.stats.rows_rejected == 2
        assert batch.stats.rows_filtered_short == 1
        assert batch.stats.accepted == 2
        assert batch.stats.distinct_ids == 3
        assert [r.duration for r in batch.records] == [715, 5]

    def test_rejections_carry_line_numbers(self) -> None:
        batch = ingest_cdr(self.LINES)
        assert len(batch.rejections) == 2
        assert batch.rejections[0].startswith("row 5:")
        assert batch.rejections[1].startswith("row 6:")

    def test_min_duration(self) -> None:
        batch = ingest_cdr(self.LINES, IngestConfig(min_duration=0))
        assert batch.stats.rows_filtered_short == 0
        assert batch.stats.accepted == 3

    def test_explicit_header_flag(self) -> None:
        # 先頭行がデータでも has_header=True なら読み飛ばす
        batch = ingest_cdr(self.LINES[1:], IngestConfig(has_header=True))
        assert batch.stats.rows_read == 4
        batch = ingest_cdr(self.LINES[1:], IngestConfig(has_header=None))
        assert batch.stats.rows_read == 5

    def test_header_as_data_is_rejected(self) -> None:
        batch = ingest_cdr(self.LINES[:2], IngestConfig(has_header=False))
        assert batch.stats.rows_rejected == 1
        assert batch.stats.accepted == 1

    def test_malformed_first_row_is_rejected(self) -> None:
        batch = ingest_cdr(["01MAI2017,14:51:14,715,a,b", "01MAR2017,14:51:14,715,a,b"])
        assert batch.stats.rows_read == 2
        assert batch.stats.rows_rejected == 1
        assert batch.stats.accepted == 1
        assert batch.rejections[0].startswith("row 1:")
        stats = batch.stats
        assert stats.rows_read == stats.accepted + stats.rows_rejected + stats.rows_filtered_short

    @pytest.mark.parametrize(
        "header",
        [
            "start_date,start_time,duration,from_id,to_id",
            "START_DATE,Start_Time,Duration,FROM_ID,to_id",
            "Start date,Start time,Duration,From,To",
        ],
    )
    def test_header_detected_by_column_names(self, header: str) -> None:
        batch = ingest_cdr([header, "01MAR2017,14:51:14,715,a,b"])
        assert batch.stats.rows_read == 1
        assert batch.rejections == []

    def test_tab_delimiter(self) -> None:
        config = IngestConfig(delimiter="\\t")
        batch = ingest_cdr(["01MAY2017\t10:00:00\t60\ta\tb"], config)
        assert config.delimiter == "\t"
        assert batch.stats.accepted == 1

    def test_format_round_trip(self) -> None:
        batch = ingest_cdr(self.LINES)
        again = ingest_cdr(list(format_cdr_lines(batch.records)))
        assert again.records == batch.records


@pytest.mark.infrastructure
class TestCdrSourceFactory:
    def test_create(self) -> None:
        source = create_cdr_source(IngestConfig())
        assert isinstance(source, CsvCdrSource)
        assert source.read_cdr(["01MAY2017,10:00:00,60,a,b"]).stats.accepted == 1

    def test_invalid_delimiter(self) -> None:
        with pytest.raises(ValueError, match="single character"):
            IngestConfig(delimiter=";;")
