"""
Driving the package from the command line
=========================================

The ``ncx`` script wraps the harness.  Here it is called in-process; the
shell equivalent is shown beside each call.
"""

import json
import os
import tempfile

from ncx.cli import main

tmp = tempfile.mkdtemp()

# ncx verify khintchine --count 4 --seed 3 --format csv
out = os.path.join(tmp, "rows.csv")
print("exit", main(["verify", "khintchine", "--count", "4", "--seed", "3",
                    "--format", "csv", "--out", out]))
print(open(out).read())

###############################################################################
# ncx gen inst.json --kind paley2 ; ncx split inst.json

inst = os.path.join(tmp, "inst.json")
main(["gen", inst, "--kind", "paley2", "--kset", "1,3,8"])
print(json.load(open(inst))["meta"])
main(["split", inst])

###############################################################################
# ncx norm solve seq.json

seq = os.path.join(tmp, "seq.json")
with open(seq, "w") as fh:
    json.dump({"items": [[[[3.0, 0.0]]], [[[4.0, 0.0]]]]}, fh)
main(["norm", "solve", seq])
