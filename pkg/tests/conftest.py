import pytest

from rieszlab import grid


@pytest.fixture(scope="session")
def grid_2d():
    return grid.make_grid(2, 64, 8.0)


@pytest.fixture(scope="session")
def grid_3d():
    return grid.make_grid(3, 32, 8.0)


@pytest.fixture(scope="session")
def gaussian_2d(grid_2d):
    return grid.test_function(grid_2d, "gaussian", sigma=0.8)


@pytest.fixture(scope="session")
def gaussian_3d(grid_3d):
    return grid.test_function(grid_3d, "gaussian", sigma=0.8)


@pytest.fixture(scope="session")
def shifted_2d(grid_2d):
    return grid.test_function(
        grid_2d, "shifted_gaussian", center=[0.8, 0.0], sigma=0.8
    )
