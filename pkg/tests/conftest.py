from hypothesis import settings
from hypothesis import strategies as st

from sfcfa.terms import App, Atom, assign_labels

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")


def unlabelled_terms(atoms: str, max_leaves: int = 8):
    leaf = st.sampled_from(list(atoms)).map(Atom)
    return st.recursive(leaf, lambda sub: st.builds(App, sub, sub), max_leaves=max_leaves)


def labelled_terms(atoms: str, max_leaves: int = 8):
    return unlabelled_terms(atoms, max_leaves).map(lambda t: assign_labels(t)[0])


sk_terms = labelled_terms("SK")
sf_terms = labelled_terms("SF")


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
