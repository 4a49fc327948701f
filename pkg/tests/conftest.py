import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from support import generate_program  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"

CORPUS_SIZE = 1000

# build seconds per shared fixture; the acceptance module counts these
# toward the property-suite time budget
BUILD_TIMES: dict[str, float] = {}


@pytest.fixture(scope="session")
def corpus():
    """1000 generated programs with their oracle structures."""
    t0 = time.perf_counter()
    out = [generate_program(seed) for seed in range(CORPUS_SIZE)]
    BUILD_TIMES["corpus"] = time.perf_counter() - t0
    return out


@pytest.fixture(scope="session")
def parsed_corpus(corpus):
    """The corpus parsed once: (program, symbol table, occurrences)."""
    from impid.javaparse import extract_occurrences

    t0 = time.perf_counter()
    out = []
    for prog in corpus:
        table, occs = extract_occurrences(prog.source)
        out.append((prog, table, occs))
    BUILD_TIMES["parse"] = time.perf_counter() - t0
    return out


@pytest.fixture(scope="session")
def planned_corpus(parsed_corpus):
    """Plans built over the corpus with per-program randomized profiles and
    aliases that actually hit identities of the program."""
    from dataclasses import replace

    from impid.pipeline import build_plan_from_parsed
    from support import random_profile

    t0 = time.perf_counter()
    out = []
    for i, (prog, table, occs) in enumerate(parsed_corpus):
        rng = random.Random(10_000 + i)
        profile = random_profile(rng)
        aliases = {}
        identities = sorted({o.identity for o in occs})
        for n, identity in enumerate(rng.sample(identities, min(3, len(identities)))):
            if rng.random() < 0.7:
                aliases[identity] = f"zz{i}_{n}"
        profile = replace(profile, aliases=aliases)
        plan = build_plan_from_parsed(table, occs, prog.source,
                                      f"gen{i}.java", profile)
        out.append((prog, profile, plan))
    BUILD_TIMES["plans"] = time.perf_counter() - t0
    return out


@pytest.fixture()
def fixtures_dir():
    return FIXTURES
