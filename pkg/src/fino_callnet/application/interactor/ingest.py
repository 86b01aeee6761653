import logging

from fino_callnet.application.input.ingest import IngestInput
from fino_callnet.application.output.ingest import IngestOutput
from fino_callnet.domain.error import DataError
from fino_callnet.domain.repository.pipeline import PipelineRepository

logger = logging.getLogger(__name__)


class IngestUseCase:
    def __init__(self, pipeline_repository: PipelineRepository) -> None:
        self.pipeline_repository = pipeline_repository

    def execute(self, input: IngestInput) -> IngestOutput:
        cdr = input.cdr_source.read_cdr(input.calls)
        bank = input.bank_source.read_bank(input.accounts, input.transactions, input.card_activity)
        if not bank.records:
            raise DataError("no bank customer with card activity")

        self.pipeline_repository.save_cdr(cdr.records, cdr.stats, cdr.rejections)
        self.pipeline_repository.save_bank(
            bank.records,
            bank.rejections,
            {
                "bank_customers": len(bank.records),
                "excluded_no_card": bank.excluded_no_card,
                "orphan_transactions": bank.orphan_transactions,
                "rejected": len(bank.rejections),
            },
        )
        return IngestOutput(
            rows_read=cdr.stats.rows_read,
            rows_accepted=cdr.stats.accepted,
            rows_rejected=cdr.stats.rows_rejected,
            rows_filtered_short=cdr.stats.rows_filtered_short,
            distinct_ids=cdr.stats.distinct_ids,
            bank_customers=len(bank.records),
            excluded_no_card=bank.excluded_no_card,
            orphan_transactions=bank.orphan_transactions,
            bank_rejections=len(bank.rejections),
        )
