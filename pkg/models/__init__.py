"""Network models, counter augmentation and moment matrices"""

from models.network import *
from models.augment import *
from models.assembly import *
