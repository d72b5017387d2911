import re

import numpy as np

from graphot.io import PlanFile
from graphot.viz import render_heatmap


def _plan(entries, row_labels=None, col_labels=None):
    n, m = np.shape(entries)
    return PlanFile(
        row_labels=row_labels or [f"x{i}" for i in range(n)],
        col_labels=col_labels or [f"y{j}" for j in range(m)],
        entries=np.asarray(entries, dtype=float),
        metadata={},
    )


def _cell_fills(svg_text):
    fills = []
    for match in re.finditer(r'<rect x="(\d+)" y="(\d+)" width="24" height="24" fill="#([0-9a-f]{6})"', svg_text):
        fills.append((int(match.group(1)), int(match.group(2)), match.group(3)))
    return fills


def test_single_cell_full_intensity(tmp_path):
    path = tmp_path / "one.svg"
    render_heatmap(_plan([[1.0]]), path)
    fills = _cell_fills(path.read_text())
    assert len(fills) == 1
    assert fills[0][2] == "000000"


def test_permutation_plan_has_n_dark_cells(tmp_path):
    n = 4
    entries = np.zeros((n, n))
    perm = [2, 0, 3, 1]
    entries[np.arange(n), perm] = 0.25
    path = tmp_path / "perm.svg"
    render_heatmap(_plan(entries), path)
    fills = _cell_fills(path.read_text())
    assert len(fills) == n * n
    dark = [(x, y) for x, y, color in fills if int(color[:2], 16) < 128]
    assert len(dark) == n
    assert len({x for x, _ in dark}) == n and len({y for _, y in dark}) == n


def test_byte_identical_output(tmp_path):
    entries = np.random.default_rng(0).random((3, 5))
    entries /= entries.sum()
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    render_heatmap(_plan(entries), a)
    render_heatmap(_plan(entries), b)
    assert a.read_bytes() == b.read_bytes()


def test_tooltips_carry_exact_values(tmp_path):
    value = 0.123456789012345
    path = tmp_path / "tip.svg"
    render_heatmap(_plan([[value, 1.0 - value]], ["row"], ["colA", "colB"]), path)
    text = path.read_text()
    assert f"<title>row -&gt; colA: {value!r}</title>" in text or f"<title>row -> colA: {value!r}</title>" in text


def test_labels_are_escaped(tmp_path):
    path = tmp_path / "esc.svg"
    render_heatmap(_plan([[1.0]], ["a<b&c"], ["d>e"]), path)
    text = path.read_text()
    assert "a&lt;b&amp;c" in text
    assert "a<b&c" not in text


def test_axis_orientation(tmp_path):
    # rows are the first domain (vertical axis), columns the second (horizontal)
    entries = np.array([[0.5, 0.25, 0.25]]) / 1.0
    path = tmp_path / "wide.svg"
    render_heatmap(_plan(entries, ["onlyrow"], ["c0", "c1", "c2"]), path)
    fills = _cell_fills(path.read_text())
    ys = {y for _, y, _ in fills}
    xs = {x for x, _, _ in fills}
    assert len(ys) == 1 and len(xs) == 3
