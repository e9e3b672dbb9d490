"""Video-response social graph analytics.

Thin python surface over the C++ core: trace ingestion, response-graph
construction, structural metrics, distribution fits, UserRank, anti-social
flagging, synthetic trace generation, and the sampling crawler.
"""

from ._respgraph import *  # noqa: F401,F403
from ._respgraph import __doc__ as _core_doc  # noqa: F401
