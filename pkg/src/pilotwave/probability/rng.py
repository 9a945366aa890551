"""
決定的な乱数ストリームモジュール。

カウンタベースの Philox 生成器を (シード, 用途, ストリーム番号) で鍵付けする。
バッチごとに独立したストリームを使うので、並列度に関係なく結果が再現する。
"""

from enum import IntEnum

import numpy as np


class StreamPurpose(IntEnum):
    """乱数ストリームの用途。用途が違えば同じ番号でも独立になる。"""

    SAMPLING = 0
    MONTE_CARLO = 1
    CHECKS = 2


def stream(
    seed: int, index: int, purpose: StreamPurpose = StreamPurpose.SAMPLING
) -> np.random.Generator:
    """
    (seed, purpose, index) に対応する独立な乱数生成器を返す。

    Parameters:
        seed (int): 利用者が与えるシード（非負）
        index (int): ストリーム番号（バッチ番号など）
        purpose (StreamPurpose): 用途

    Returns:
        np.random.Generator: Philox に基づく生成器
    """
    sequence = np.random.SeedSequence(seed, spawn_key=(int(purpose), index))
    return np.random.Generator(np.random.Philox(sequence))
