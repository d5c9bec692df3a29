# -*- coding: utf-8 -*-
# File: __init__.py


from .libinfo import __version__, __git_version__

from .errors import *
from .rates import *
from .sampling import *
from .subordinators import *
from .processes import *

# verify, scenario and cli are imported explicitly by users
