#!/usr/bin/env python3
"""DOT and JSON emission for explored AR-quiver fragments.

Both formats are produced from the dict form of a fragment, so a fragment read
back from the cache renders byte-identically to a freshly computed one.
"""

import json
from typing import Dict, Optional

from artranslate import QuiverFragment, TreeClassEvidence

FORMAT_VERSION = "1"

DOT_TEMPLATE = """digraph fragment {
  rankdir = "LR" ;
  node [fontname="Helvetica", fontsize=10, shape=oval] ;

  // vertices
  %s

  // projective attachments
  %s

  // arrows
  %s

  // translates
  %s
}
"""


def fragment_to_dict(fragment: QuiverFragment, evidence: Optional[TreeClassEvidence] = None) -> Dict:
    out = {
        "version": FORMAT_VERSION,
        "algebra": fragment.algebra.config.to_dict(),
        "algebra_hash": fragment.algebra.digest(),
        "radius": fragment.radius,
        "seed": fragment.seed,
        "budget_exhausted": fragment.budget_exhausted,
        "flags": list(fragment.flags),
        "vertices": [
            {
                "id": v.id,
                "key": v.key_string(),
                "dim": v.dim,
                "distance": v.distance,
                "orbit": v.orbit,
                "periodic": v.periodic,
                "tau_period": v.tau_period,
                "frontier": v.frontier,
                "verdict": v.verdict,
                "module": {"dim": v.dim, "actions": [X.tolist() for X in v.module.actions]},
            }
            for v in fragment.vertices
        ],
        "arrows": [{"source": u, "target": w, "a": a, "b": b} for u, w, a, b in fragment.valuations()],
        "tau": [[w, t] for w, t in sorted(fragment.tau_of.items())],
        "sequences": [
            {"end": r.end, "left": r.left, "middle": [list(x) for x in r.middle], "projective": r.projective}
            for _, r in sorted(fragment.records.items())
        ],
        "projective_attachments": [list(t) for t in fragment.projective_attachments()],
    }
    if evidence is not None:
        out["evidence"] = evidence.to_dict()
    return out


def to_json(data: Dict) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def _valuation_label(x) -> str:
    return "?" if x is None else str(x)


def to_dot(data: Dict) -> str:
    """Graphviz source: vertices labelled "d=<dim> id=<key>" plus " P" when periodic."""
    nodes = []
    for v in data["vertices"]:
        label = "d=%d id=%s%s" % (v["dim"], v["key"], " P" if v["periodic"] else "")
        style = ", style=dashed" if v["frontier"] else ""
        nodes.append('"v%d" [label="%s"%s] ;' % (v["id"], label, style))
    boxes = []
    for k, (end, mult) in enumerate(data["projective_attachments"]):
        name = "A" if mult == 1 else "A^%d" % mult
        boxes.append('"P%d" [label="%s", shape=box] ;' % (k, name))
        boxes.append('"P%d" -> "v%d" [style=dotted] ;' % (k, end))
    arrows = ['"v%d" -> "v%d" [label="(%s,%s)"] ;' % (a["source"], a["target"], _valuation_label(a["a"]),
                                                      _valuation_label(a["b"]))
              for a in data["arrows"]]
    translates = ['"v%d" -> "v%d" [style=dashed, color=gray, constraint=false] ;' % (w, t)
                  for w, t in data["tau"] if w != t]
    sep = "\n  "
    return DOT_TEMPLATE % (sep.join(nodes), sep.join(boxes), sep.join(arrows), sep.join(translates))
