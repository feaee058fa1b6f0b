import pytest

from orientflow.graph_core import WeightedGraph, parse_graph

EDGE = "p 2 1\ne 1 2 1\n"
TRI = "p 3 3\ne 1 3 5\ne 1 2 1\ne 2 3 1\n"
DIAMOND = "p 4 5\ne 1 2 1\ne 1 3 1\ne 2 4 1\ne 3 4 1\ne 2 3 1\n"
K4 = "p 4 6\ne 1 2 1\ne 1 3 1\ne 1 4 1\ne 2 3 1\ne 2 4 1\ne 3 4 1\n"
P4 = "p 4 3\ne 1 2 1\ne 2 3 1\ne 3 4 1\n"
# two triangles sharing the cut vertex 3
BOWTIE = "p 5 6\ne 1 2 1\ne 1 3 1\ne 2 3 1\ne 3 4 1\ne 3 5 1\ne 4 5 1\n"

FIXTURE_TEXT = {"edge": EDGE, "tri": TRI, "diamond": DIAMOND, "k4": K4, "p4": P4}


@pytest.fixture
def g_edge() -> WeightedGraph:
    return parse_graph(EDGE)


@pytest.fixture
def g_tri() -> WeightedGraph:
    return parse_graph(TRI)


@pytest.fixture
def g_diamond() -> WeightedGraph:
    return parse_graph(DIAMOND)


@pytest.fixture
def g_bowtie() -> WeightedGraph:
    return parse_graph(BOWTIE)


@pytest.fixture
def graph_files(tmp_path):
    paths = {}
    for name, text in {**FIXTURE_TEXT, "bowtie": BOWTIE}.items():
        p = tmp_path / f"{name}.g"
        p.write_text(text)
        paths[name] = str(p)
    zero = tmp_path / "zero.d"
    zero.write_text("# all zero\n")
    paths["zero"] = str(zero)
    return paths


# acceptance criteria report one line each at the end of the run
ACCEPTANCE: dict[int, tuple[str, str]] = {}


@pytest.fixture
def criterion(request):
    def record(number: int, name: str, ok: bool, detail: str = "") -> None:
        ACCEPTANCE[number] = ("PASS" if ok else "FAIL", f"{name}{': ' + detail if detail else ''}")
        assert ok, f"criterion {number} ({name}) failed: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        status, text = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number} {status} {text}")
