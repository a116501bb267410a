import warnings

import pytest

from entropic_packet import QuadratureConfig, make_packet
from entropic_packet.errors import NearEdgeWarning

# Frozen from mpmath at 30-40 significant digits: loggamma/digamma for S_x,
# direct quadrature of -rho ln rho over p with besselk for S_p.
REFERENCE_ENTROPIES = {
    0.6: (7.75672517250040427848805824657867497952, -3.87259762391098472176149182614),
    0.75: (4.013301006383827101807873681493444115137, -1.093430449910095722682555432410946340117),
    1.0: (2.531024246969290792977891594269411847798, -0.02995178399524515304226883282628794195079),
    1.25: (1.946926913790567071938696221136216290563, 0.4102499797578364852348151422860960533616),
    1.5: (1.613705638880109381165535757083646863849, 0.6743693754183122876419805967307452227231),
    2.0: (1.224171427529236102395123715727588415874, 1.0),
    3.0: (0.8227837161973457937903689526501141205213, 1.357662474513538312670675307049423931215),
    5.0: (0.4342813937805545440059976971588605469412, 1.723743500733544450815174870316661373062),
    10.0: (0.00001801027821470323469608796021897308786756, 2.14818988611336100787727231080326267727),
    40.0: (-0.7530874486479682438700780300079984655093, 2.898046374103232191241647463701338776255),
}


def packet_quiet(alpha):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NearEdgeWarning)
        return make_packet(alpha)


@pytest.fixture
def cfg():
    return QuadratureConfig()


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
