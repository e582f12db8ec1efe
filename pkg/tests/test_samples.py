import json
import math

import numpy as np
import pytest

from ckgeom import samples
from ckgeom.space import KappaPair, the_nine


@pytest.fixture
def table():
    return samples.SampleTable(KappaPair(-1.0, 1.0), 1.0, "polar", ["x", "flag", "kind"],
                               [[0.1, True, "circle"], [math.nan, False, "geodesic"], [np.float64(1 / 3), np.bool_(True), "x"]])


def test_json_round_trip(tmp_path, table):
    path = tmp_path / "t.json"
    path.write_text(samples.dumps_json(table))
    doc = json.loads(path.read_text())
    assert doc["rows"][1][0] is None
    assert doc["rows"][2][:2] == [1 / 3, True]
    back = samples.read_table(path)
    assert back.kp == table.kp and back.columns == table.columns


def test_csv_cells(table):
    lines = samples.dumps_csv(table).splitlines()
    assert lines == ["x,flag,kind", "0.1,1,circle", "nan,0,geodesic", f"{1 / 3!r},1,x"]


def test_csv_round_trip(tmp_path, table):
    path = tmp_path / "t.csv"
    path.write_text(samples.dumps_csv(table))
    back = samples.read_table(path)
    assert back.kp is None
    assert np.isnan(back.column("x")[1]) and back.column("flag").tolist() == [1, 0, 1]


def test_schema_rejects_zero_scale(table):
    doc = samples.to_document(table)
    doc["ell"] = 0
    with pytest.raises(samples.MalformedSampleError):
        samples.validate_document(doc)


@pytest.mark.parametrize("name", ["S2", "H2", "AdS", "dS", "NH-"])
def test_moved_geodesic_residuals(name):
    table = samples.sample_geodesic(the_nine(name), n=40)
    assert table.column("residual").max() < 1e-10


def test_line_span():
    assert samples.line_span(1.0) < math.pi
    assert samples.line_span(-4.0) == 3.0
