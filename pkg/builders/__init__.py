"""Network models of failing stations, rerouted links and replicated storage"""

from builders.subsets import *
from builders.retrial import *
from builders.rerouting import *
from builders.storage import *
