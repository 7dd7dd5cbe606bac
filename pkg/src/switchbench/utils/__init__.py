from .singleton import *
from .performance_monitor import *
from .logger import *
