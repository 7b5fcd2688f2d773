"""CSV ingestion, round trips, and column transforms."""

import numpy as np
import pytest

from jpr import (
    DataMatrix,
    DegenerateFeatureError,
    InputIOError,
    NonFiniteError,
    ParseError,
    ShapeError,
    center_columns,
    check_symmetric,
    load_csv,
    load_matrix_csv,
    standardize_columns,
    write_csv,
    write_matrix_csv,
)


def test_load_with_header(tmp_path):
    f = tmp_path / "d.csv"
    f.write_text("a,b\n1,2\n3,4\n")
    d = load_csv(f, has_header=True)
    assert d.feature_names == ["a", "b"]
    assert np.array_equal(d.values, [[1.0, 2.0], [3.0, 4.0]])
    assert not d.centered


def test_load_without_header(tmp_path):
    f = tmp_path / "d.csv"
    f.write_text("1,2\n3,4\n")
    d = load_csv(f, has_header=False)
    assert d.feature_names is None
    assert np.array_equal(d.values, [[1.0, 2.0], [3.0, 4.0]])


def test_load_sniffs_header(tmp_path):
    f = tmp_path / "d.csv"
    f.write_text("x1,x2\n1,2\n3,4\n")
    assert load_csv(f).feature_names == ["x1", "x2"]
    g = tmp_path / "e.csv"
    g.write_text("1,2\n3,4\n")
    assert load_csv(g).feature_names is None


def test_load_ragged_rows(tmp_path):
    f = tmp_path / "d.csv"
    f.write_text("1,2,3\n4,5\n")
    with pytest.raises(ShapeError):
        load_csv(f, has_header=False)


def test_load_missing_field_location(tmp_path):
    f = tmp_path / "d.csv"
    f.write_text("1,2,3\n1,,3\n")
    with pytest.raises(ParseError) as err:
        load_csv(f, has_header=False)
    assert err.value.row == 2
    assert err.value.column == 2


def test_load_non_numeric_field(tmp_path):
    f = tmp_path / "d.csv"
    f.write_text("1,2\n3,oops\n")
    with pytest.raises(ParseError) as err:
        load_csv(f, has_header=False)
    assert err.value.row == 2 and err.value.column == 2


def test_load_rejects_non_finite_text(tmp_path):
    f = tmp_path / "d.csv"
    f.write_text("1,2\nnan,4\n")
    with pytest.raises(ParseError):
        load_csv(f, has_header=False)


def test_load_missing_file(tmp_path):
    with pytest.raises(InputIOError):
        load_csv(tmp_path / "nope.csv")


def test_load_too_small(tmp_path):
    one_row = tmp_path / "r.csv"
    one_row.write_text("1,2\n")
    with pytest.raises(ShapeError):
        load_csv(one_row, has_header=False)
    one_col = tmp_path / "c.csv"
    one_col.write_text("1\n2\n")
    with pytest.raises(ShapeError):
        load_csv(one_col, has_header=False)


def test_csv_round_trip_is_exact(tmp_path):
    rng = np.random.default_rng(7)
    d = DataMatrix(rng.standard_normal((9, 4)) * 10.0 ** rng.integers(-8, 8, (9, 4)),
                   feature_names=["w", "x", "y", "z"])
    f = tmp_path / "d.csv"
    write_csv(d, f)
    back = load_csv(f, has_header=True)
    assert back.feature_names == d.feature_names
    assert np.array_equal(back.values, d.values)


def test_matrix_csv_round_trip_is_exact(tmp_path):
    rng = np.random.default_rng(3)
    m = rng.standard_normal((6, 6)) * 1e-7
    f = tmp_path / "m.csv"
    write_matrix_csv(m, f)
    assert np.array_equal(load_matrix_csv(f), m)


def test_matrix_csv_requires_square(tmp_path):
    f = tmp_path / "m.csv"
    f.write_text("1,2,3\n4,5,6\n")
    with pytest.raises(ShapeError):
        load_matrix_csv(f)


def test_center_columns():
    rng = np.random.default_rng(0)
    d = DataMatrix(rng.standard_normal((50, 3)) + 5.0, feature_names=["a", "b", "c"])
    c = center_columns(d)
    assert c.centered
    assert c.feature_names == d.feature_names
    assert np.max(np.abs(c.values.mean(axis=0))) <= 1e-10 * max(1.0, np.max(c.values.std(axis=0)))


def test_center_is_idempotent_within_rounding():
    rng = np.random.default_rng(1)
    c = center_columns(DataMatrix(rng.standard_normal((40, 4))))
    cc = center_columns(c)
    scale = np.max(np.abs(c.values))
    assert np.max(np.abs(cc.values - c.values)) <= 64 * np.finfo(float).eps * scale


def test_standardize_columns():
    rng = np.random.default_rng(2)
    d = center_columns(DataMatrix(rng.standard_normal((60, 3)) * [1.0, 10.0, 0.1]))
    s = standardize_columns(d)
    assert np.allclose(s.values.std(axis=0), 1.0, atol=1e-12)


def test_standardize_rejects_constant_column():
    x = np.ones((10, 2))
    x[:, 0] = np.arange(10.0)
    with pytest.raises(DegenerateFeatureError):
        standardize_columns(DataMatrix(x))


def test_datamatrix_validation():
    with pytest.raises(NonFiniteError):
        DataMatrix(np.array([[1.0, np.nan], [2.0, 3.0]]))
    with pytest.raises(ShapeError):
        DataMatrix(np.array([[1.0], [2.0]]))  # single column
    with pytest.raises(ShapeError):
        DataMatrix(np.ones((2, 3)), feature_names=["a", "b"])
    # a single sampled row is allowed; estimation rejects it separately
    one = DataMatrix(np.array([[1.0, 2.0]]))
    assert one.n == 1 and one.p == 2
    frozen = DataMatrix(np.ones((3, 2)))
    with pytest.raises(ValueError):
        frozen.values[0, 0] = 5.0


def test_check_symmetric():
    assert check_symmetric(np.eye(3))
    m = np.eye(3)
    m[0, 1] = 1e-5
    assert not check_symmetric(m)
    assert check_symmetric(m + m.T - np.eye(3) * 1.0)
