"""Build the witness over many random extensions of the base pair and refute
each A1/A2 with the complete amalgam search."""
import argparse
import dataclasses
import json
import time
from dataclasses import dataclass

from poset_amalgam.amalgam import amalgam_exists
from poset_amalgam.errors import InternalInvariantBroken
from poset_amalgam.generators import random_pa_extension
from poset_amalgam.partial_auto import PaEmbedding
from poset_amalgam.witness import REPAIRED, base_pair, build_witness


@dataclass
class SweepConfig:
    seeds: int = 100
    first_seed: int = 0
    steps: int = 8
    max_size: int = 6
    variant: str = REPAIRED
    search: bool = True


def sweep(cfg: SweepConfig) -> dict:
    A = base_pair()
    rows = []
    for seed in range(cfg.first_seed, cfg.first_seed + cfg.seeds):
        At = random_pa_extension(A, cfg.steps, seed, max_size=cfg.max_size)
        t = time.time()
        row = {"seed": seed, "atilde": len(At.poset)}
        try:
            W = build_witness(At, variant=cfg.variant)
        except InternalInvariantBroken as exc:
            row["error"] = str(exc)
            rows.append(row)
            continue
        row.update(n=W.meta.n, m=W.meta.m, A1=len(W.A1.poset), A2=len(W.A2.poset),
                   certificate=W.certificate.valid)
        if cfg.search:
            res = amalgam_exists(A, W.A1, W.A2, PaEmbedding.inclusion(A, W.A1),
                                 PaEmbedding.inclusion(A, W.A2))
            row["amalgam"] = res is not None
        row["seconds"] = round(time.time() - t, 4)
        rows.append(row)
    ok = sum(1 for r in rows if r.get("certificate") and not r.get("amalgam", False))
    return {"config": dataclasses.asdict(cfg), "refuted": ok, "total": len(rows), "rows": rows}


def main():
    p = argparse.ArgumentParser(description=__doc__)
    for f in dataclasses.fields(SweepConfig):
        if f.type in (bool, "bool"):
            p.add_argument(f"--no-{f.name}", dest=f.name, action="store_false")
        else:
            p.add_argument(f"--{f.name.replace('_', '-')}", type=type(f.default), default=f.default)
    cfg = SweepConfig(**vars(p.parse_args()))
    out = sweep(cfg)
    print(json.dumps({k: v for k, v in out.items() if k != "rows"}, indent=2))
    for r in out["rows"]:
        print(json.dumps(r))


if __name__ == "__main__":
    main()
