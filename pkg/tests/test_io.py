import pytest

from fccgrid.colorings import power2, verify_window
from fccgrid.io import FormatError, read_coloring, read_region, write_coloring, write_region
from fccgrid.lattice import box_region


def test_region_round_trip(tmp_path):
    region = box_region(-4, 4, -2, 2, -1, 1)
    write_region(region, tmp_path / "r.jsonl")
    assert read_region(tmp_path / "r.jsonl").sites == region.sites


@pytest.mark.parametrize("line", ['{"x": 1, "y": 0, "z": 0}', '{"x": 0.0, "y": 0, "z": 0}',
                                  '{"x": 0, "y": 0}', "not json"])
def test_bad_region_lines(tmp_path, line):
    p = tmp_path / "bad.jsonl"
    p.write_text('{"x": 0, "y": 0, "z": 0}\n' + line + "\n")
    with pytest.raises(FormatError, match=":2:"):
        read_region(p)


def test_coloring_round_trip(tmp_path):
    region = box_region(-4, 4, -4, 4, 0, 1)
    write_coloring(power2(), region, tmp_path / "c.csv")
    spec, back = read_coloring(tmp_path / "c.csv")
    assert back.sites == region.sites
    assert all(spec(s) == power2()(s) for s in region)
    assert verify_window(spec, back, 2).valid


@pytest.mark.parametrize("body", ["a,b,c,color\n", "x,y,z,color\n1,0,0,3\n",
                                  "x,y,z,color\n0,0,0,1\n0,0,0,2\n", "x,y,z,color\n0,0,0\n"])
def test_bad_coloring_files(tmp_path, body):
    p = tmp_path / "bad.csv"
    p.write_text(body)
    with pytest.raises(FormatError):
        read_coloring(p)
