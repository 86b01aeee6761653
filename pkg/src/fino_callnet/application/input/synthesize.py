from dataclasses import dataclass

from fino_callnet.interface.config.synth import SynthConfig
from fino_callnet.interface.port.storage import StoragePort


@dataclass(frozen=True, slots=True)
class SynthesizeInput:
    config: SynthConfig
    storage: StoragePort
    prefix: str = ""
