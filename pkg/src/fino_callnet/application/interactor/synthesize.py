import logging

from fino_callnet.application.input.synthesize import SynthesizeInput
from fino_callnet.application.output.synthesize import SynthesizeOutput
from fino_callnet.infrastructure.adapter.synth.generator import generate, write_synth

logger = logging.getLogger(__name__)


class SynthesizeUseCase:
    def execute(self, input: SynthesizeInput) -> SynthesizeOutput:
        logger.info("synth: generating %d nodes (seed=%d)", input.config.n_nodes, input.config.seed)
        dataset = generate(input.config)
        written = write_synth(dataset, input.storage, prefix=input.prefix)
        subjects = dataset.truth[dataset.truth["role"] == "subject"]
        return SynthesizeOutput(
            written=written,
            n_calls=len(dataset.calls),
            n_bank_customers=len(dataset.bank),
            n_subjects=len(subjects),
            realized_default_rate=dataset.realized_default_rate,
        )
