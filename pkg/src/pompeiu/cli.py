"""Command-line front end.

Subcommands: evaluate, potential, grad, flow, spectrum, scan.  Inputs are
shape/kernel JSON files; outputs are JSON/CSV (and optional SVG frames for
flows) written under --out.  A --config JSON file overrides flags key by
key.  Exit codes: 0 ok, 2 invalid input, 3 numeric failure, 4 flow
degeneracy or stall.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import energy, flow, geometry, scan as scan_mod, shape_calculus
from .kernel import BesselKernel, ConstantKernel, RadialKernel, kernel_from_dict

_EXIT_OK = 0
_EXIT_INPUT = 2
_EXIT_NUMERIC = 3
_EXIT_FLOW = 4


class _InputError(ValueError):
    pass


def _load_json(path: str) -> dict:
    p = Path(path)
    if not p.is_file():
        raise _InputError(f"no such file: {path}")
    try:
        with open(p) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise _InputError(f"malformed JSON in {path}: {exc}") from exc


def _load_shape(path: str) -> geometry.StarShape:
    try:
        return geometry.StarShape.from_dict(_load_json(path))
    except ValueError as exc:
        raise _InputError(f"invalid shape file {path}: {exc}") from exc


def _load_kernel(path: str) -> RadialKernel:
    try:
        return kernel_from_dict(_load_json(path))
    except ValueError as exc:
        raise _InputError(f"invalid kernel file {path}: {exc}") from exc


def _apply_config(args: argparse.Namespace) -> argparse.Namespace:
    if getattr(args, "config", None):
        cfg = _load_json(args.config)
        if not isinstance(cfg, dict):
            raise _InputError(f"config {args.config} must be a JSON object")
        for key, val in cfg.items():
            setattr(args, key.replace("-", "_"), val)
    return args


def _resolutions(args) -> dict:
    n = int(getattr(args, "resolution", 256) or 256)
    if n < 32 or n % 2 != 0:
        raise _InputError(f"--resolution must be even and >= 32, got {n}")
    res = {
        "n_boundary": n,
        "n_theta": max(32, n // 2),
        "n_rho": max(8, n // 16),
        "m_directions": n,
    }
    for key in res:
        override = getattr(args, key, None)
        if override is not None:
            res[key] = int(override)
    if res["n_boundary"] < 16 or res["n_boundary"] % 2 != 0:
        raise _InputError("n_boundary must be even and >= 16")
    if res["m_directions"] < 16 or res["m_directions"] % 2 != 0:
        raise _InputError("m_directions must be even and >= 16")
    if res["n_theta"] < 16 or res["n_rho"] < 4:
        raise _InputError("interior resolutions below module bounds")
    return res


def _write_json(path: Path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _report_dict(rep) -> dict:
    d = {"value": rep.value, "method": rep.method, "error_estimate": rep.error_estimate}
    if rep.n_boundary is not None:
        d["n_boundary"] = rep.n_boundary
    if rep.n_interior is not None:
        d["n_interior"] = list(rep.n_interior)
    if rep.n_directions is not None:
        d["n_directions"] = rep.n_directions
    return d


def _cmd_evaluate(args) -> int:
    shape = _load_shape(args.shape)
    kernel = _load_kernel(args.kernel)
    res = _resolutions(args)
    out = _out_dir(args)
    quad = geometry.interior_quadrature(shape, res["n_theta"], res["n_rho"])
    spatial = energy.energy_spatial(shape, kernel, quad)
    grid = geometry.sample_boundary(shape, res["n_boundary"])
    if isinstance(kernel, BesselKernel) and kernel.dim == 2:
        spectral = energy.energy_spectral(shape, kernel.lam, res["m_directions"], grid)
    elif isinstance(kernel, ConstantKernel):
        a = energy._grid_area(shape, grid)
        spectral = energy.EnergyReport(value=kernel.c * a * a, method="spectral",
                                       error_estimate=0.0, n_boundary=grid.n_nodes)
    else:
        spectral = None
    result = {"spatial": _report_dict(spatial)}
    if spectral is not None:
        result["spectral"] = _report_dict(spectral)
        result["difference"] = abs(spatial.value - spectral.value)
    else:
        result["spectral"] = None
        result["difference"] = None
    _check_finite(spatial.value)
    _write_json(out / "evaluate.json", result)
    print(json.dumps(result, indent=2, sort_keys=True))
    return _EXIT_OK


def _cmd_potential(args) -> int:
    shape = _load_shape(args.shape)
    kernel = _load_kernel(args.kernel)
    res = _resolutions(args)
    out = _out_dir(args)
    probes = []
    for spec in args.probe or []:
        try:
            x, y = (float(v) for v in spec.split(","))
        except ValueError as exc:
            raise _InputError(f"bad --probe {spec!r}, expected 'x,y'") from exc
        probes.append([x, y])
    if getattr(args, "probes", None):
        probes.extend([[float(p[0]), float(p[1])] for p in args.probes])
    if not probes:
        raise _InputError("no probe points given (use --probe x,y)")
    quad = geometry.interior_quadrature(shape, res["n_theta"], res["n_rho"])
    values = energy.potential(shape, kernel, np.asarray(probes), quad)
    _check_finite(float(np.max(np.abs(values))))
    result = {"probes": probes, "values": [float(v) for v in values]}
    _write_json(out / "potential.json", result)
    print(json.dumps(result, indent=2, sort_keys=True))
    return _EXIT_OK


def _cmd_grad(args) -> int:
    shape = _load_shape(args.shape)
    kernel = _load_kernel(args.kernel)
    res = _resolutions(args)
    out = _out_dir(args)
    grid = geometry.sample_boundary(shape, res["n_boundary"])
    quad = geometry.interior_quadrature(shape, res["n_theta"], res["n_rho"])
    g = shape_calculus.gradient_density(shape, kernel, grid, quad)
    _check_finite(g.sup_norm)
    lines = ["theta,g"]
    lines += [f"{float(t)!r},{float(v)!r}" for t, v in zip(grid.theta, g.values)]
    with open(out / "gradient.csv", "w") as fh:
        fh.write("\n".join(lines) + "\n")
    _write_json(out / "gradient.json", {"sup_norm": g.sup_norm})
    print(json.dumps({"sup_norm": g.sup_norm}))
    return _EXIT_OK


def _svg_frame(shape: geometry.StarShape, path: Path, n: int = 512) -> None:
    theta = np.linspace(0.0, 2.0 * np.pi, n + 1)
    pts = shape.boundary_points(theta)
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    pad = 0.05 * float(np.max(hi - lo))
    lo -= pad
    hi += pad
    coords = " ".join(f"{x:.6f},{-y:.6f}" for x, y in pts)
    svg = (
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{lo[0]:.6f} {-hi[1]:.6f} {hi[0] - lo[0]:.6f} {hi[1] - lo[1]:.6f}">\n'
        f'<polyline points="{coords}" fill="none" stroke="black" '
        f'stroke-width="{0.004 * float(np.max(hi - lo)):.6f}"/>\n</svg>\n'
    )
    with open(path, "w") as fh:
        fh.write(svg)


def _flow_options(args, res) -> flow.FlowOptions:
    kwargs = dict(
        n_boundary=res["n_boundary"], n_theta=res["n_theta"],
        n_rho=res["n_rho"], m_directions=res["m_directions"],
    )
    for key in ("dt0", "dt_max", "max_steps", "grad_tol", "energy_tol",
                "recenter", "k_fit"):
        val = getattr(args, key, None)
        if val is not None:
            kwargs[key] = val
    try:
        return flow.FlowOptions(**kwargs)
    except ValueError as exc:
        raise _InputError(str(exc)) from exc


def _write_flow_outputs(out: Path, traj, args) -> None:
    flow.write_trajectory_csv(traj, out / "trajectory.csv")
    _write_json(out / "final_shape.json", traj.final_shape.to_dict())
    svg_every = int(getattr(args, "svg_every", 0) or 0)
    if svg_every > 0:
        frames = out / "frames"
        frames.mkdir(exist_ok=True)
        for i, rec in enumerate(traj.records):
            if i % svg_every == 0 or i == len(traj.records) - 1:
                _svg_frame(rec.shape, frames / f"frame_{i:06d}.svg")


def _cmd_flow(args) -> int:
    shape = _load_shape(args.shape)
    kernel = _load_kernel(args.kernel)
    res = _resolutions(args)
    out = _out_dir(args)
    opts = _flow_options(args, res)
    try:
        traj = flow.run_flow(shape, kernel, opts)
    except flow.FlowError as exc:
        if exc.trajectory is not None and len(exc.trajectory) > 0:
            _write_flow_outputs(out, exc.trajectory, args)
        print(f"flow failed: {exc}", file=sys.stderr)
        return _EXIT_FLOW
    _write_flow_outputs(out, traj, args)
    summary = {
        "reason": traj.reason,
        "steps": len(traj) - 1,
        "final_energy": traj.records[-1].energy,
        "final_grad_sup": traj.records[-1].grad_sup,
        "final_area": traj.records[-1].area,
    }
    if getattr(args, "seed", None) is not None:
        summary["seed"] = args.seed
    _write_json(out / "flow.json", summary)
    print(json.dumps(summary, indent=2, sort_keys=True))
    return _EXIT_OK


def _cmd_spectrum(args) -> int:
    kernel = _load_kernel(args.kernel)
    if not isinstance(kernel, BesselKernel) or kernel.dim != 2:
        raise _InputError("spectrum requires a planar bessel kernel")
    res = _resolutions(args)
    out = _out_dir(args)
    radius = float(getattr(args, "radius", 1.0) or 1.0)
    k_max = int(getattr(args, "k_max", 6) or 6)
    if radius <= 0:
        raise _InputError("radius must be positive")
    if k_max < 0 or k_max > res["n_boundary"] // 4:
        raise _InputError(f"k_max must be in [0, {res['n_boundary'] // 4}]")
    spec = shape_calculus.ball_mode_spectrum(radius, kernel.lam, k_max,
                                             res["n_boundary"])
    kernel_mode_tol = 1e-6 * max(1.0, radius) ** 2
    entries = [
        {
            "k": e.k,
            "parity": e.parity,
            "value": e.value,
            "closed_form": e.closed_form,
            "kernel_mode": bool(e.value < kernel_mode_tol),
        }
        for e in spec.entries
    ]
    result = {"radius": spec.radius, "lambda": spec.lam, "critical": spec.critical,
              "entries": entries}
    _write_json(out / "spectrum.json", result)
    print(json.dumps(result, indent=2, sort_keys=True))
    return _EXIT_OK


def _cmd_scan(args) -> int:
    shape = _load_shape(args.shape)
    res = _resolutions(args)
    out = _out_dir(args)
    lam_min = float(getattr(args, "lambda_min", 1.0) or 1.0)
    lam_max = float(getattr(args, "lambda_max", 8.0) or 8.0)
    n_lambda = int(getattr(args, "n_lambda", 128) or 128)
    n_dir = int(getattr(args, "n_dir", 64) or 64)
    tol = float(getattr(args, "tol", 1e-6) or 1e-6)
    if not (0 < lam_min < lam_max):
        raise _InputError("need 0 < lambda-min < lambda-max")
    if n_lambda < 2 or n_dir < 16:
        raise _InputError("n_lambda >= 2 and n_dir >= 16 required")
    grid = geometry.sample_boundary(shape, res["n_boundary"])
    result = scan_mod.scan(shape, lam_min, lam_max, n_lambda, n_dir, grid)
    _check_finite(result.min_value)
    scan_mod.write_scan_csv(result, out / "scan.csv")
    summary = scan_mod.scan_summary(result, tol)
    _write_json(out / "scan.json", summary)
    print(json.dumps(summary, indent=2, sort_keys=True))
    return _EXIT_OK


def _check_finite(value: float) -> None:
    if not math.isfinite(value):
        raise ArithmeticError(f"non-finite result: {value}")


def _out_dir(args) -> Path:
    out = Path(getattr(args, "out", None) or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _add_common(p: argparse.ArgumentParser, shape=True, kernel=True) -> None:
    if shape:
        p.add_argument("--shape", required=True, help="shape JSON file")
    if kernel:
        p.add_argument("--kernel", required=True, help="kernel JSON file")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--config", help="JSON file whose keys override flags")
    p.add_argument("--resolution", type=int, default=256,
                   help="master resolution (boundary nodes; interior and "
                        "direction counts are derived from it)")
    p.add_argument("--seed", type=int, help="seed recorded in outputs")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="pompeiu",
        description="Domain energies for radial kernels: evaluation, shape "
                    "gradients, antigradient flows, disk Hessian spectra and "
                    "Pompeiu-type frequency scans.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evaluate", help="energy by both routes, with difference")
    _add_common(p)
    p.set_defaults(fn=_cmd_evaluate)

    p = sub.add_parser("potential", help="interior potential at probe points")
    _add_common(p)
    p.add_argument("--probe", action="append", help="probe point 'x,y' (repeatable)")
    p.set_defaults(fn=_cmd_potential)

    p = sub.add_parser("grad", help="shape-gradient boundary density")
    _add_common(p)
    p.set_defaults(fn=_cmd_grad)

    p = sub.add_parser("flow", help="run the antigradient flow")
    _add_common(p)
    p.add_argument("--svg-every", type=int, default=0,
                   help="write an SVG frame every K accepted steps")
    p.set_defaults(fn=_cmd_flow)

    p = sub.add_parser("spectrum", help="disk Hessian mode spectrum")
    _add_common(p, shape=False)
    p.add_argument("--radius", type=float, default=1.0, help="disk radius")
    p.add_argument("--k-max", dest="k_max", type=int, default=6)
    p.set_defaults(fn=_cmd_spectrum)

    p = sub.add_parser("scan", help="frequency scan of the indicator transform")
    _add_common(p, kernel=False)
    p.add_argument("--lambda-min", dest="lambda_min", type=float, default=1.0)
    p.add_argument("--lambda-max", dest="lambda_max", type=float, default=8.0)
    p.add_argument("--n-lambda", dest="n_lambda", type=int, default=128)
    p.add_argument("--n-dir", dest="n_dir", type=int, default=64)
    p.add_argument("--tol", type=float, default=1e-6,
                   help="failure threshold as a fraction of the area")
    p.set_defaults(fn=_cmd_scan)
    return ap


def main(argv=None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        args = _apply_config(args)
        return args.fn(args)
    except _InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return _EXIT_INPUT
    except (geometry.DegenerateShapeError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return _EXIT_INPUT
    except ArithmeticError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return _EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
