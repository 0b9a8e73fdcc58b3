# core/services/random_streams.py - 시드 분할 규칙

"""
모든 난수는 사용자가 준 64비트 시드 하나에서 용도별 스트림으로 갈라집니다.

    derive_seed(seed, STREAM_TRIAL, t)           t번째 반올림 시행
    derive_seed(seed, STREAM_SAMPLED_ORDER, r, v) 표본 순서의 (라운드, 정점)
    derive_seed(seed, STREAM_CALIBRATION, j)     스케일 보정 j번째 단계
    derive_seed(seed, STREAM_SPARSIFY, a)        희소화 a번째 시도
    derive_seed(seed, STREAM_NODE, l, d, i)      구간 트리 (계층, 깊이, 노드) 부분 문제
    derive_seed(seed, STREAM_GENERATOR, j)       인스턴스 생성기 (j=1 은 흔들기)
    derive_seed(seed, STREAM_BENCH, i)           bench 인스턴스 i (생성기 시드와 솔버 시드 각각)

같은 키는 병렬 정도와 무관하게 같은 스트림을 줍니다.
"""

import numpy as np

STREAM_TRIAL = 1
STREAM_SELECTION = 2
STREAM_SAMPLED_ORDER = 3
STREAM_CALIBRATION = 4
STREAM_SPARSIFY = 5
STREAM_NODE = 6
STREAM_GENERATOR = 7
STREAM_BENCH = 8

def derive_seed(seed: int, *keys: int) -> int:
    """(seed, keys...) 에서 64비트 시드를 결정적으로 만듭니다."""
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])

def make_rng(seed: int, *keys: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(derive_seed(seed, *keys)))

