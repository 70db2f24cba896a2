import copy

import pytest
from hypothesis import HealthCheck, settings

from idchain.crypto.rand import SeededRng
from idchain.protocol import CertificateAuthority, UserDocs, run_registration
from idchain.sim.runner import simulate
from idchain.sim.scenario import BUNDLED
from idchain.threshold import committee_keygen

# pairing-heavy properties run slowly; keep example counts modest and drop deadlines
settings.register_profile(
    "idchain",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile("idchain")


@pytest.fixture(scope="session")
def committee():
    return committee_keygen(5, 2, SeededRng(11, "committee"))


@pytest.fixture(scope="session")
def ca():
    return CertificateAuthority.create("ca-test", SeededRng(12, "ca"))


@pytest.fixture(scope="session")
def alice_docs():
    return UserDocs.make("passport:alice", "DE", 1990)


@pytest.fixture(scope="session")
def _registration(ca, committee, alice_docs):
    keyset, _ = committee
    return run_registration(alice_docs, ca, keyset, SeededRng(13, "reg"), clock_day=0)


@pytest.fixture
def cert(_registration):
    # certificates count their accounts, so each test gets its own copy
    return copy.deepcopy(_registration[0])


@pytest.fixture(scope="session")
def record(_registration):
    return _registration[1]


class _SimCache:
    def __init__(self):
        self._runs = {}

    def __getitem__(self, name):
        if name not in self._runs:
            self._runs[name] = simulate(name)
        return self._runs[name]


@pytest.fixture(scope="session")
def sims():
    return _SimCache()


@pytest.fixture(scope="session")
def bundled():
    return BUNDLED


# -- acceptance report ----------------------------------------------------

_criteria: dict[int, list] = {}


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    n, title = marker
    entry = _criteria.setdefault(n, [title, True, False])
    if report.failed:
        entry[1] = False
    if report.when == "call":
        entry[2] = True


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        outcome.get_result().criterion = (mark.args[0], mark.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        title, ok, ran = _criteria[n]
        verdict = "PASS" if ok and ran else "FAIL"
        terminalreporter.write_line(f"criterion {n:2d} {verdict}  {title}")
