import pytest

from treeball.census import census_compatible_classes, census_discrete_lifts
from treeball.constructions import (build_centered, build_diagonal,
                                    build_full_lift, build_parity_lift)
from treeball.permcore import Perm, PermGroup


def sign_weight(G):
    return {p: (0 if p.sign() == 1 else 1) for p in G.elements}


@pytest.fixture(scope="session")
def s3():
    return PermGroup.symmetric(3)


@pytest.fixture(scope="session")
def a3():
    return PermGroup.alternating(3)


@pytest.fixture(scope="session")
def gamma_s3(s3):
    return build_diagonal(s3)


@pytest.fixture(scope="session")
def delta_s3(s3):
    return build_centered(s3)


@pytest.fixture(scope="session")
def phi_s3(s3):
    return build_full_lift(s3)


@pytest.fixture(scope="session")
def phi_a3(a3):
    return build_full_lift(a3)


@pytest.fixture(scope="session")
def pi_one(s3):
    return build_parity_lift(s3, sign_weight(s3), 2, [1])


@pytest.fixture(scope="session")
def pi_both(s3):
    return build_parity_lift(s3, sign_weight(s3), 2, [0, 1])


@pytest.fixture(scope="session")
def census_rows():
    return census_compatible_classes(3, 2)


@pytest.fixture(scope="session")
def lift_rows(census_rows):
    return census_discrete_lifts(census_rows)


@pytest.fixture(scope="session")
def sl23():
    vecs = [(0, 1), (0, 2), (1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2)]
    index = {v: i for i, v in enumerate(vecs)}

    def mat(a, b, c, d):
        return Perm(tuple(
            index[((a * x + b * y) % 3, (c * x + d * y) % 3)]
            for x, y in vecs))

    return PermGroup.generated([mat(1, 1, 0, 1), mat(0, 2, 1, 0)])


@pytest.fixture(scope="session")
def flips6():
    return PermGroup.generated([
        Perm((1, 0, 2, 3, 4, 5)),
        Perm((0, 1, 3, 2, 4, 5)),
        Perm((0, 1, 2, 3, 5, 4)),
    ])
