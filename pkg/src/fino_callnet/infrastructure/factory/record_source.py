from fino_callnet.infrastructure.adapter.record_source.csv_bank import CsvBankSource
from fino_callnet.infrastructure.adapter.record_source.csv_cdr import CsvCdrSource
from fino_callnet.interface.config.ingest import IngestConfig
from fino_callnet.interface.port.record_source import BankSourcePort, CdrSourcePort


def create_cdr_source(config: IngestConfig) -> CdrSourcePort:
    return CsvCdrSource(config=config)


def create_bank_source(config: IngestConfig) -> BankSourcePort:
    return CsvBankSource(config=config)
