try:
    from ._cmefsp import *  # noqa: F401,F403  (installed wheel layout)
except ImportError:
    from _cmefsp import *  # noqa: F401,F403  (in-tree build, module on PYTHONPATH)
