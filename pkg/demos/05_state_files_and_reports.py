"""State files and machine-checkable verdict reports.

States serialize to a small JSON format that round-trips bit-identically;
verdicts serialize with their certificates so a report can be revalidated
against the input without rerunning the analysis.  The same operations are
available from the command line:

    spptkit generate rho0 --b 0.5 --out rho0.json
    spptkit check sppt rho0.json
    spptkit classify rho0.json --json report.json
"""

import json
import tempfile
from pathlib import Path

import numpy as np

from spptkit import classify, io
from spptkit.states import random_sppt, sppt_counterexample_2x3

workdir = Path(tempfile.mkdtemp(prefix="spptkit-demo-"))

# --- state files round-trip exactly ------------------------------------------
state = sppt_counterexample_2x3()
path = workdir / "counterexample.json"
io.save_state(state, path)
text = path.read_text()
print("state file:", path)
print("first 90 characters:", text[:90], "...")
again = io.dumps_state(io.load_state(path))
print("write -> read -> write is bit-identical:", again == text)
print()

# --- verdict reports carry replayable certificates ---------------------------
state, _ = random_sppt(4, rank=4, normal_s=True, seed=5, with_tail=True)
verdict = classify(state)
report = io.verdict_to_dict(verdict)
print("verdict class:", report["class"])
print("certificate type:", report["certificate"]["type"])

# replay: rebuild the decomposition from the JSON and check it sums to rho
total = np.zeros_like(state.rho)
for term in report["certificate"]["terms"]:
    total += np.kron(io.pairs_to_matrix(term["qubit"]),
                     io.pairs_to_matrix(term["qudit"]))
err = np.linalg.norm(total - state.rho) / np.linalg.norm(state.rho)
print("replayed decomposition residual:", f"{err:.2e}")
print()
print("full report is plain JSON:",
      len(json.dumps(report)), "bytes for this state")
