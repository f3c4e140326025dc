"""Independent implementation of the documented hash-embedding procedure.

Prints, for each (text, dim, seed) case, the IEEE-754 bit patterns of the
resulting vector. The frozen values in tests/test_embeddings.cpp and the
acceptance suite come from this script.

    python3 hash_embed_oracle.py
"""
import struct

MASK = (1 << 64) - 1
FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3


def token_key(token: bytes, seed: int) -> int:
    h = FNV_OFFSET
    for b in token + seed.to_bytes(8, "little"):
        h ^= b
        h = (h * FNV_PRIME) & MASK
    return h


def splitmix(state: int):
    while True:
        state = (state + 0x9E3779B97F4A7C15) & MASK
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        yield z ^ (z >> 31)


def hash_embed(text: str, dim: int, seed: int):
    lowered = "".join(chr(ord(c) + 32) if "A" <= c <= "Z" else c for c in text)
    vec = [0.0] * dim
    for tok in lowered.encode("utf-8").split():  # bytes.split() splits on ASCII whitespace
        rng = splitmix(token_key(tok, seed))
        for i in range(dim):
            vec[i] += (next(rng) >> 11) * 2.0**-53 * 2.0 - 1.0
    return vec


def bits(x: float) -> str:
    return "0x%016x" % struct.unpack("<Q", struct.pack("<d", x))[0]


CASES = [
    ("deep learning", 8, 42),
    ("Deep  Learning", 8, 42),
    ("deep", 4, 0),
    ("keyphrase extraction pipeline", 5, 18446744073709551615),
]

if __name__ == "__main__":
    for text, dim, seed in CASES:
        v = hash_embed(text, dim, seed)
        print(repr(text), dim, seed)
        print("  " + ", ".join(bits(x) for x in v))
        print("  " + ", ".join(repr(x) for x in v))
