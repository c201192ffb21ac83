"""Mutation fuzzing of the .dop parser.

Seeds are the shipped .dop files and printouts of small catalog entries.
Every mutant must either parse or raise :class:`DslError`; anything else
counts as a crash.
"""

from __future__ import annotations

import random
from importlib import resources

from .sysdsl import DslError, parse, to_dsl

__all__ = ["seed_corpus", "mutate", "fuzz_parser"]

_ALPHABET = "abcdxyz0123456789 \n\t+-*/^()[],;{}:#_.=!@é"
_SNIPPETS = ["d[", "]", "(", ")", "^", "^-", "/0", "/(x1-x1)", "eq:", "system", "vars", "params",
             "unknowns", "d[x1,x1]", ";", "}", "{", "*", "--", "9999999999999999", "^50", "#"]


def seed_corpus() -> list[str]:
    from .catalog import airy, double_pendulum, killing, vessiot

    out = []
    for name in ("vessiot.dop", "pendulum.dop", "airy.dop"):
        out.append(resources.files("dopalg").joinpath("data", name).read_text(encoding="utf-8"))
    for sd in (killing(2), airy(), vessiot(1), double_pendulum(True)):
        out.append(to_dsl(sd))
    out.append("vars x1 x2; unknowns u; system z { eq: d[x1]u; }")
    out.append("vars x1 x2; unknowns xi1 xi2; system m { eq: x1^2*d[x1]xi1 + xi2; }")
    return out


def mutate(text: str, rng: random.Random) -> str:
    s = text
    for _ in range(rng.randint(1, 4)):
        op = rng.randrange(7)
        pos = rng.randint(0, len(s))
        if op == 0 and s:
            j = min(len(s), pos + rng.randint(1, 8))
            s = s[:pos] + s[j:]
        elif op == 1:
            s = s[:pos] + rng.choice(_ALPHABET) + s[pos:]
        elif op == 2 and s and pos < len(s):
            s = s[:pos] + rng.choice(_ALPHABET) + s[pos + 1:]
        elif op == 3:
            s = s[:pos] + rng.choice(_SNIPPETS) + s[pos:]
        elif op == 4 and s:
            i, j = sorted((rng.randrange(len(s)), rng.randrange(len(s))))
            s = s[:pos] + s[i:j][:40] + s[pos:]
        elif op == 5:
            s = s[:pos]
        else:
            k = rng.randint(1, 30)
            s = s[:pos] + "(" * k + "x1" + ")" * rng.randint(0, k) + s[pos:]
    return s


def fuzz_parser(samples: int = 10_000, seed: int = 0) -> dict:
    rng = random.Random(seed)
    corpus = seed_corpus()
    ok = errors = crashes = 0
    first_crash = None
    for _ in range(samples):
        text = mutate(rng.choice(corpus), rng)
        try:
            parse(text)
            ok += 1
        except DslError as exc:
            errors += 1
            if exc.line < 1 or exc.col < 1:
                crashes += 1
        except Exception as exc:  # noqa: BLE001 - any other exception is a finding
            crashes += 1
            if first_crash is None:
                first_crash = (text, repr(exc))
    return {"samples": samples, "parsed": ok, "structured_errors": errors, "crashes": crashes,
            "first_crash": first_crash}
