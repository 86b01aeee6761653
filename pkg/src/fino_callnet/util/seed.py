import hashlib

import numpy as np


def stage_seed(master_seed: int, *names: str | int) -> np.random.SeedSequence:
    """
    マスターシードから名前付きのサブストリームを作る
    名前はPythonのhash()ではなくSHA-256で数値化する（プロセス間で不変）
    """
    key = "/".join(str(name) for name in names).encode("utf-8")
    digest = int.from_bytes(hashlib.sha256(key).digest()[:8], "big")
    return np.random.SeedSequence([master_seed, digest])


def stage_rng(master_seed: int, *names: str | int) -> np.random.Generator:
    return np.random.default_rng(stage_seed(master_seed, *names))


def stage_int(master_seed: int, *names: str | int) -> int:
    """scikit-learn の random_state に渡す32bit整数"""
    return int(stage_seed(master_seed, *names).generate_state(1)[0])
