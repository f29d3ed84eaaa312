"""Independent ground truth: simulation, truncated master equation and closed forms"""

from oracles.closed_form import *
from oracles.simulation import *
from oracles.master_equation import *
