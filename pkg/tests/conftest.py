import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from wnlink.synthgen import WorldSpec, build_world, generate_world  # noqa: E402

SMALL = WorldSpec(seed=3, synsets=60, target_words=100, documents=30,
                  occurrences_per_sense=8, source_sentences_per_synset=10)


@pytest.fixture(scope="session")
def small_world():
    return build_world(SMALL)


@pytest.fixture(scope="session")
def small_world_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("world")
    world = generate_world(SMALL, out)
    return out, world


@pytest.fixture
def write(tmp_path):
    """Write text to a file under tmp_path and return its path."""
    def _write(name, text):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return p
    return _write


@pytest.fixture(scope="session")
def small_run(small_world_dir):
    """Full pipeline over the small world, with reduced embedding size."""
    from wnlink.pipeline import PipelineConfig, run_pipeline
    from wnlink.synthgen import FILES

    out, world = small_world_dir
    cfg = PipelineConfig(**{k: str(out / v) for k, v in FILES.items() if k != "truth"},
                         workdir=str(out / "work"), emb_dim=50, emb_min_count=1)
    run_pipeline(cfg)
    return cfg, world


ACCEPTANCE: list[str] = []


@pytest.fixture
def criterion():
    """Record one acceptance line; failures are recorded and re-raised."""
    from contextlib import contextmanager

    @contextmanager
    def _criterion(number, title):
        detail = {}
        try:
            yield detail
        except BaseException as exc:
            line = f"FAIL  [{number}] {title}: {exc}".splitlines()[0]
            ACCEPTANCE.append(line)
            print(line)
            raise
        line = f"PASS  [{number}] {title}" + (f": {detail['msg']}" if "msg" in detail else "")
        ACCEPTANCE.append(line)
        print(line)
    return _criterion


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split("[")[1].split("]")[0])):
            terminalreporter.write_line(line)
