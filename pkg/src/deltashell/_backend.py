"""Select the numeric core at import time.

The compiled extension (``deltashell._core_c``) is preferred when it was
built; otherwise the pure-Python twin is used. Set the environment variable
``DELTASHELL_BACKEND`` to ``compiled`` or ``python`` to force the choice
(``compiled`` raises if the extension is missing).
"""

import os

_choice = os.environ.get("DELTASHELL_BACKEND", "auto").strip().lower()

if _choice in ("auto", ""):
    try:
        from . import _core_c as _impl

        backend_name = "compiled"
    except ImportError:
        from . import _core_py as _impl

        backend_name = "python"
elif _choice in ("compiled", "c", "ext"):
    from . import _core_c as _impl

    backend_name = "compiled"
elif _choice in ("python", "py", "pure"):
    from . import _core_py as _impl

    backend_name = "python"
else:
    raise ImportError(f"unknown DELTASHELL_BACKEND value: {_choice!r}")

iv_pair_scaled = _impl.iv_pair_scaled
kv_pair_scaled = _impl.kv_pair_scaled
integrate_radial = _impl.integrate_radial
