from fractions import Fraction

import pytest

from circlegather.configuration import Configuration
from circlegather.render import RenderSpec, render_svg
from circlegather.sim import FsyncPolicy, run


def F(s):
    return Fraction(s)


@pytest.fixture(scope="module")
def trace():
    cfg = Configuration.from_points([F(0), F("1/10"), F("9/20"), F("7/10")])
    return run(cfg, FsyncPolicy())


def test_render_spec_validation(tmp_path):
    with pytest.raises(ValueError):
        RenderSpec(str(tmp_path / "x.svg"), frame_stride=0)
    with pytest.raises(ValueError):
        RenderSpec(str(tmp_path / "x.svg"), image_size=10)


def test_render_produces_svg(trace, tmp_path):
    svg = render_svg(trace, RenderSpec(str(tmp_path / "out.svg")))
    assert svg.startswith("<svg")
    assert svg.rstrip().endswith("</svg>")
    assert "circle" in svg


def test_render_is_deterministic(trace, tmp_path):
    spec = RenderSpec(str(tmp_path / "out.svg"))
    assert render_svg(trace, spec) == render_svg(trace, spec)


def test_frame_stride_reduces_frames(trace, tmp_path):
    full = render_svg(trace, RenderSpec(str(tmp_path / "a.svg"), frame_stride=1))
    sparse = render_svg(trace, RenderSpec(str(tmp_path / "b.svg"), frame_stride=5))
    assert full.count("t=") > sparse.count("t=")


def test_labels_are_optional(trace, tmp_path):
    labelled = render_svg(
        trace, RenderSpec(str(tmp_path / "c.svg"), show_labels=True)
    )
    assert "r0" in labelled
    plain = render_svg(trace, RenderSpec(str(tmp_path / "d.svg")))
    assert "r0" not in plain
