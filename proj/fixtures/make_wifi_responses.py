"""Writes wifi_responses.json: 15 synthetic chat responses for wifi.md.

Each edge is perturbed in a random 5 of the 14 parseable responses and keeps
its base rating in the other 9, so the median graph equals wifi_graph.json
exactly. Response 9 is malformed.
"""
import json
import random
from pathlib import Path

here = Path(__file__).parent
graph = json.loads((here / "wifi_graph.json").read_text())
base = {(e["u"], e["v"]): round(5 * (e["w"] + 1)) for e in graph["edges"]}

rng = random.Random(20250101)
parseable = [s for s in range(15) if s != 9]
noisy = {edge: set(rng.sample(parseable, 5)) for edge in base}
responses = []
for s in range(15):
    if s == 9:
        responses.append("I am unable to rate these propositions.")
        continue
    tuples = []
    for (u, v), r in sorted(base.items(), key=lambda t: (int(t[0][0][1:]), int(t[0][1][1:]))):
        if s in noisy[(u, v)]:
            r = min(10, max(0, r + rng.choice([-2, -1, 1, 2])))
        tuples.append(f"('{u}', '{v}', {r})")
    body = "[" + ", ".join(tuples) + "]"
    if s % 4 == 1:
        body = "```python\n" + body + "\n```"
    elif s % 4 == 2:
        body = "Here is the edge list:\n" + body
    responses.append(body)
(here / "wifi_responses.json").write_text(json.dumps(responses, indent=2) + "\n")
