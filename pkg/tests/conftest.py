import numpy as np
import pytest

from semsimp.corpus import Corpus, Resource
from semsimp.kernels import available_backends
from semsimp.taxonomy import Taxonomy

FIG3_EDGES = [
    ("Person", None),
    ("Worker", "Person"),
    ("Student", "Person"),
    ("Employee", "Worker"),
    ("Freelance", "Worker"),
]

TABLE1 = [
    ("r1", ("Worker", "Student")),
    ("r2", ("Employee",)),
    ("r3", ("Student",)),
    ("r4", ("Employee", "Freelance")),
]


@pytest.fixture
def fig3():
    return Taxonomy(FIG3_EDGES)


@pytest.fixture
def table1(fig3):
    return Corpus([Resource(rid, av) for rid, av in TABLE1], fig3)


@pytest.fixture
def fig3_file(tmp_path):
    path = tmp_path / "fig3.tsv"
    path.write_text("# simple taxonomy\n" + "".join(f"{c}\t{p or '-'}\n" for c, p in FIG3_EDGES), encoding="utf-8")
    return path


@pytest.fixture
def table1_file(tmp_path):
    import json

    path = tmp_path / "table1.jsonl"
    path.write_text("".join(json.dumps({"id": rid, "annotations": list(av)}) + "\n" for rid, av in TABLE1),
                    encoding="utf-8")
    return path


@pytest.fixture(params=sorted(available_backends()))
def backend(request):
    return available_backends()[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(20240613)


# -- acceptance summary ---------------------------------------------------------

ACCEPTANCE_LINES: dict[str, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: (len(k), k)):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
