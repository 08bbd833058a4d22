from .schemas import *