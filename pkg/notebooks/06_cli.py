# %% [markdown]
# # Command line driver
#
# The same checks are available as `hypcone verify <suite>`; reports come
# as human text, json-lines or CSV.  Exit status 0 means every check passed.

# %%
import json
import subprocess
import sys

proc = subprocess.run([sys.executable, "-m", "hypcone", "verify", "flow", "--format", "json-lines"],
                      capture_output=True, text=True, check=False)
records = [json.loads(line) for line in proc.stdout.splitlines()]
print("exit code:", proc.returncode)
print(records[-1])

# %%
proc = subprocess.run([sys.executable, "-m", "hypcone", "flow", "--u0", "0", "--v0", "1.5"],
                      capture_output=True, text=True, check=False)
print(proc.stdout)

# %%
proc = subprocess.run([sys.executable, "-m", "hypcone", "sweep", "scalar-curvature", "--inclusion", "horosphere",
                       "--samples", "7"], capture_output=True, text=True, check=False)
print(proc.stdout, proc.stderr)
