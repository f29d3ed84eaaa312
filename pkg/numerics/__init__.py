"""Dense linear algebra and ODE kernels"""

from numerics.linalg import *
from numerics.ode import *
