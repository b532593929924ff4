import xml.etree.ElementTree as ET

from core.layout.disk_layout import layout_face
from core.layout.svg_editor import SvgOptions, render_svg

SVG = "{http://www.w3.org/2000/svg}"


def _circles(document: str, cls: str):
    root = ET.fromstring(document.encode("utf-8"))
    return [c for c in root.iter(f"{SVG}circle") if c.get("class") == cls]


def test_empty_list_draws_bare_disk():
    document = render_svg([])
    root = ET.fromstring(document.encode("utf-8"))
    circles = list(root.iter(f"{SVG}circle"))
    # the clip path and the disk outline
    assert len(circles) == 2
    assert not _circles(document, "dual")
    assert root.get("width") == "400"


def test_horocycle_face_figure():
    document = render_svg([layout_face(1.0, 1.0, 1.0)], titles=["face 0"])
    assert len(_circles(document, "horocycle")) == 3
    assert len(_circles(document, "tangent")) == 3
    dual = _circles(document, "dual")
    assert len(dual) == 1
    assert dual[0].get("stroke-dasharray")
    assert "face 0" in document
    assert 'clip-path="url(#unit-disk)"' in document


def test_panels_wrap_into_rows():
    layouts = [layout_face(1.0, 2.0, 3.0)] * 4
    root = ET.fromstring(render_svg(layouts, SvgOptions(panel_size=200, columns=3)).encode("utf-8"))
    assert root.get("width") == "600"
    assert root.get("height") == "400"


def test_rendering_is_deterministic():
    layouts = [layout_face(0.5, 1.0, 3.0), layout_face(2.0, 2.0, 2.0)]
    options = SvgOptions(stroke_width=2.0, show_labels=False)
    assert render_svg(layouts, options) == render_svg(layouts, options)
