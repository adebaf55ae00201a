import os
import subprocess
import sys

from pennytax._accel import use_numba


def _run(env_flag):
    env = dict(os.environ)
    env.pop("PENNYTAX_NO_NUMBA", None)
    if env_flag:
        env["PENNYTAX_NO_NUMBA"] = "1"
    code = ("import pennytax._accel as a, sys; from pennytax.cli import main; "
            "sys.stderr.write(str(a.HAVE_NUMBA)); main(['simulate', '--n', '30000', '--seed', '8'])")
    return subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True)


def test_env_flag_forces_numpy_with_identical_report():
    fallback = _run(True)
    assert fallback.stderr == "False"
    default = _run(False)
    assert default.stdout == fallback.stdout


def test_use_numba_never_enables_missing_backend():
    assert use_numba(False) is False
