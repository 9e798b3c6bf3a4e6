import pytest

from bandit_attack_lab import BanditInstance, EpisodeConfig

DESK_MEANS = (0.9, 0.8, 0.7, 0.6, 0.5)


@pytest.fixture
def desk_instance():
    return BanditInstance(DESK_MEANS, 0.1)


@pytest.fixture
def desk_config(desk_instance):
    return EpisodeConfig(desk_instance, horizon=2000, delta0=0.2, delta=0.05, seed=11)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
