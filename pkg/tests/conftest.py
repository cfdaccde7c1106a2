import pytest

from designsearch.problem import Design, DesignProblem, InstanceSpec, generate_instance


@pytest.fixture(scope="session")
def toy():
    """Four elements, two classes; the optimum (66.67) is known by enumeration."""
    return DesignProblem(
        name="toy",
        attribute_names=("a0", "a1"),
        method_names=("m0", "m1"),
        uses=((0, 0), (1, 1), (0, 1)),
        class_count=2,
    )


@pytest.fixture(scope="session")
def toy_best():
    return Design.from_classes([[0, 2], [1, 3]], attribute_count=2)


@pytest.fixture(scope="session")
def cbs_dim():
    return generate_instance(InstanceSpec(16, 15, 39, 5, 0.85, seed=101))


@pytest.fixture(scope="session")
def gdp_dim():
    return generate_instance(InstanceSpec(43, 12, 121, 5, 0.85, seed=102))


@pytest.fixture(scope="session")
def sc_dim():
    return generate_instance(InstanceSpec(52, 30, 126, 16, 0.85, seed=103))
