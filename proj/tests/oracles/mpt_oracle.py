#!/usr/bin/env python3
# Copyright 2026 The Stateproof Authors
# SPDX-License-Identifier: Apache-2.0
"""Ethereum hexary-trie reference values from py-trie (an independent
implementation of the yellow-paper trie).

Writes tests/data/mpt_vectors.json:
  - empty-trie root and single-entry roots
  - small instances over keys of <=3 bytes from {0x00, 0x01, 0xAB}
  - a 100-entry random 32-byte-key trie root
  - proof node lists (py-trie lists inline nodes too; each node carries
    its encoded length so consumers can drop inline (<32 byte) entries)
"""
import itertools
import json
import pathlib
import random

import rlp
from trie import HexaryTrie

DATA = pathlib.Path(__file__).resolve().parents[1] / "data"
ALPHABET = [0x00, 0x01, 0xAB]


def hx(b: bytes) -> str:
    return "0x" + b.hex()


def build(items):
    t = HexaryTrie({})
    for k, v in items:
        t[k] = v
    return t


def proof_nodes(t, key):
    return [hx(rlp.encode(n)) for n in t.get_proof(key)]


def small_keys():
    keys = []
    for length in (1, 2, 3):
        for combo in itertools.product(ALPHABET, repeat=length):
            keys.append(bytes(combo))
    return keys


def value_for(rng):
    if rng.random() < 0.5:
        return bytes(rng.randrange(1, 256) for _ in range(rng.randrange(1, 4)))
    return bytes(rng.randrange(256) for _ in range(rng.randrange(33, 41)))


def main() -> None:
    rng = random.Random(2935)
    keys = small_keys()

    small = []
    handpicked = [
        [b"\x00", b"\x00\x00", b"\x00\x00\x00"],
        [b"\x00", b"\x01", b"\xab"],
        [b"\xab\xab\xab", b"\xab\xab\x00", b"\xab\x00\xab", b"\x00\xab\xab"],
        [b"\x01\x01", b"\x01\x01\x01", b"\x01", b"\x00\x01\x01", b"\xab\x01", b"\xab"],
    ]
    for ks in handpicked:
        items = [(k, value_for(rng)) for k in ks]
        small.append(items)
    for _ in range(120):
        n = rng.randrange(1, 7)
        ks = rng.sample(keys, n)
        small.append([(k, value_for(rng)) for k in ks])

    small_out = []
    for items in small:
        t = build(items)
        small_out.append({
            "entries": [[hx(k), hx(v)] for k, v in items],
            "root": hx(t.root_hash),
        })

    big_items = [(rng.randbytes(32), rng.randbytes(32)) for _ in range(100)]
    big = build(big_items)

    # Two entries sharing exactly one nibble (0x12 / 0x13), short and long values.
    two_short = build([(b"\x12", b"\x01"), (b"\x13", b"\x02")])
    two_long = build([(b"\x12", b"A" * 40), (b"\x13", b"B" * 40)])

    proof_items = [(rng.randbytes(rng.choice([1, 2, 3, 20, 32])), value_for(rng)) for _ in range(40)]
    proof_trie = build(proof_items)
    probes = [k for k, _ in proof_items[:15]] + [rng.randbytes(rng.choice([1, 2, 32])) for _ in range(15)]
    proofs = []
    for key in probes:
        got = proof_trie.get(key)
        proofs.append({
            "key": hx(key),
            "value": hx(got) if got else None,
            "nodes": proof_nodes(proof_trie, key),
        })

    out = {
        "empty_root": hx(HexaryTrie({}).root_hash),
        "single_00_01": hx(build([(b"\x00", b"\x01")]).root_hash),
        "small": small_out,
        "random100": {
            "entries": [[hx(k), hx(v)] for k, v in big_items],
            "root": hx(big.root_hash),
        },
        "two_entry_short": {
            "root": hx(two_short.root_hash),
            "nodes": proof_nodes(two_short, b"\x12"),
        },
        "two_entry_long": {
            "root": hx(two_long.root_hash),
            "nodes": proof_nodes(two_long, b"\x12"),
        },
        "proof_trie": {
            "entries": [[hx(k), hx(v)] for k, v in proof_items],
            "root": hx(proof_trie.root_hash),
            "proofs": proofs,
        },
    }
    (DATA / "mpt_vectors.json").write_text(json.dumps(out, indent=1) + "\n")


if __name__ == "__main__":
    main()
