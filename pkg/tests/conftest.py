import random

from hypothesis import strategies as st

from arbotails.sampling import random_alternating_tree


def tree_strategy(max_vertices=12, zero_prob=0.35):
    return st.integers(0, 2 ** 32 - 1).map(
        lambda seed: random_alternating_tree(random.Random(seed), max_vertices, zero_prob)
    )


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
