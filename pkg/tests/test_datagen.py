import numpy as np
import pytest

from embedq.datagen import (
    RING_CENTERS,
    RING_JITTER,
    SWISS_T_RANGE,
    gen_rings,
    gen_swiss_roll,
    lift_2_9,
    load_point_cloud,
    swiss_band,
    write_point_cloud,
)
from embedq.exceptions import (
    InvalidCountError,
    MissingLabelColumnError,
    NonFiniteError,
    ParseError,
    WrongInputDimensionError,
)


class TestRings:
    def test_table_size(self):
        ds = gen_rings(500, seed=3)
        assert ds.X.shape == (2500, 2)
        assert ds.labels.n_clusters == 5
        assert np.bincount(ds.y).tolist() == [500] * 5

    def test_points_near_their_ring(self):
        ds = gen_rings(200, seed=4)
        r = np.linalg.norm(ds.X - RING_CENTERS[ds.y], axis=1)
        assert np.all(np.abs(r - 1.0) <= 3 * RING_JITTER + 1e-12)

    def test_deterministic(self):
        a, b = gen_rings(50, seed=9), gen_rings(50, seed=9)
        assert a.X.tobytes() == b.X.tobytes()
        assert not np.array_equal(a.X, gen_rings(50, seed=10).X)

    def test_too_small(self):
        with pytest.raises(InvalidCountError):
            gen_rings(2)


class TestSwissRoll:
    def test_table_size(self):
        ds = gen_swiss_roll(1500, seed=1)
        assert ds.X.shape == (1500, 3)
        assert ds.labels.n_clusters == 4

    def test_radius_equals_t_and_bands(self):
        ds = gen_swiss_roll(400, seed=2)
        t = np.hypot(ds.X[:, 0], ds.X[:, 2])
        angle = np.arctan2(ds.X[:, 2], ds.X[:, 0])
        # t is recoverable from the angle up to whole turns; the radius pins the turn
        assert np.all((t >= SWISS_T_RANGE[0] - 1e-9) & (t <= SWISS_T_RANGE[1] + 1e-9))
        np.testing.assert_allclose(np.cos(t), np.cos(angle), atol=1e-9)
        assert np.array_equal(swiss_band(t), ds.y)

    def test_bands_equal_width(self):
        lo, hi = SWISS_T_RANGE
        edges = lo + (hi - lo) * np.array([0.25, 0.5, 0.75])
        assert swiss_band(edges - 1e-9).tolist() == [0, 1, 2]
        assert swiss_band(edges + 1e-9).tolist() == [1, 2, 3]

    def test_small_n_has_every_band(self):
        assert gen_swiss_roll(4, seed=0).labels.n_clusters == 4

    def test_deterministic(self):
        assert gen_swiss_roll(30, seed=5).X.tobytes() == gen_swiss_roll(30, seed=5).X.tobytes()

    def test_too_small(self):
        with pytest.raises(InvalidCountError):
            gen_swiss_roll(3)


class TestLift:
    def test_ones(self):
        assert lift_2_9([[1.0, 1.0]]).tolist() == [[2, 0, 1, 1, 1, 1, 1, 1, 1]]

    def test_origin(self):
        assert lift_2_9([[0.0, 0.0]]).tolist() == [[0.0] * 9]

    def test_hand_derived(self):
        assert lift_2_9([[2.0, -1.0]]).tolist() == [[1, 3, -2, 4, 1, -4, 2, 8, -1]]

    def test_first_two_columns_invert(self):
        X = np.random.default_rng(0).normal(size=(50, 2))
        L = lift_2_9(X)
        np.testing.assert_allclose(np.column_stack([(L[:, 0] + L[:, 1]) / 2, (L[:, 0] - L[:, 1]) / 2]), X,
                                   rtol=0, atol=1e-15)

    def test_wrong_dim(self):
        with pytest.raises(WrongInputDimensionError):
            lift_2_9(np.zeros((3, 3)))


class TestCsv:
    def test_with_labels(self, tmp_path):
        f = tmp_path / "a.csv"
        f.write_text("x,y,label\n0,1,2\n1,1,2\n3.5,-1,7\n")
        ds = load_point_cloud(f, "label")
        assert ds.X.shape == (3, 2)
        assert ds.y.tolist() == [0, 0, 1]
        assert ds.columns == ("x", "y")

    def test_non_numeric(self, tmp_path):
        f = tmp_path / "a.csv"
        f.write_text("x,y\n0,1\n1,abc\n")
        with pytest.raises(ParseError) as info:
            load_point_cloud(f)
        assert info.value.line == 3

    def test_ragged(self, tmp_path):
        f = tmp_path / "a.csv"
        f.write_text("x,y\n0,1\n1\n")
        with pytest.raises(ParseError):
            load_point_cloud(f)

    def test_no_label_column(self, tmp_path):
        f = tmp_path / "a.csv"
        f.write_text("x,y\n0,1\n1,1\n")
        ds = load_point_cloud(f)
        assert ds.labels.n_clusters == 1 and ds.y.tolist() == [0, 0]

    def test_missing_label_column(self, tmp_path):
        f = tmp_path / "a.csv"
        f.write_text("x,y\n0,1\n")
        with pytest.raises(MissingLabelColumnError):
            load_point_cloud(f, "label")

    def test_nan_cell(self, tmp_path):
        f = tmp_path / "a.csv"
        f.write_text("x,y\n0,1\nnan,2\n")
        with pytest.raises(NonFiniteError) as info:
            load_point_cloud(f)
        assert (info.value.row, info.value.col) == (1, 0)

    def test_round_trip_exact(self, tmp_path):
        ds = gen_rings(20, seed=1)
        ds.to_csv(tmp_path / "r.csv")
        back = load_point_cloud(tmp_path / "r.csv", "label")
        assert back.X.tobytes() == ds.X.tobytes()
        assert np.array_equal(back.y, ds.y)

    def test_write_without_labels(self, tmp_path):
        write_point_cloud(tmp_path / "w.csv", np.eye(2))
        assert (tmp_path / "w.csv").read_text().splitlines()[0] == "x,y"
