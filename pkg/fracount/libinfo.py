
# These lines will be programatically read/write by setup.py
# Don't touch them.
__version__ = '0.1'
__git_version__ = "0.1"