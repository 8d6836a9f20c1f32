"""CSV and text report emitters.

CSV files start with comment lines ``# key=value`` (library version and the
config hash among them), then a header row, then data rows.  Floats are
rendered with ``repr`` (shortest round-trip form), so identical computations
produce identical bytes; nothing time- or machine-dependent is written.
"""

from __future__ import annotations

import io

from ._version import __version__


def _fmt(v):
    if isinstance(v, complex):
        return f"{v.real!r}{'+' if v.imag >= 0 else '-'}{abs(v.imag)!r}j"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def csv_bytes(meta, columns, rows):
    buf = io.StringIO()
    buf.write(f"# ncres {__version__}\n")
    for k in sorted(meta):
        buf.write(f"# {k}={meta[k]}\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue().encode()


def residue_csv(breakdown, meta):
    rows = [("interior", breakdown.interior.real, breakdown.interior.imag),
            ("green", breakdown.green.real, breakdown.green.imag),
            ("boundary_pdo", breakdown.boundary_pdo.real,
             breakdown.boundary_pdo.imag),
            ("total", breakdown.total.real, breakdown.total.imag)]
    return csv_bytes(meta, ["block", "value_re", "value_im"], rows)


def residue_report(breakdown, meta):
    lines = [_report_head("residue", meta)]
    lines.append(f"  interior      {breakdown.interior:.12g}")
    lines.append(f"  green         {breakdown.green:.12g}")
    lines.append(f"  boundary pdo  {breakdown.boundary_pdo:.12g}")
    lines.append(f"  total         {breakdown.total:.12g}")
    return "\n".join(lines) + "\n"


def dixmier_csv(est, meta):
    rows = [(int(p), float(s), float(r), float(v))
            for p, s, r, v in zip(est.cesaro_points, est.sigma_values,
                                  est.ratio_values, est.cesaro_values)]
    header_meta = dict(meta)
    header_meta.update({
        "slope": repr(est.slope),
        "window": f"{est.window[0]}..{est.window[1]}",
        "fit_residual": repr(est.fit_residual),
        "cesaro_tail": repr(est.cesaro_tail),
        "cesaro_drift": repr(est.cesaro_drift),
        "omega_consistent": est.omega_consistent,
    })
    return csv_bytes(header_meta,
                     ["N", "sigma_N", "sigma_over_lnN", "cesaro_mean"], rows)


def dixmier_report(est, meta, expected=None):
    lines = [_report_head("dixmier", meta)]
    lines.append(f"  slope estimate   {est.slope:.10g}")
    lines.append(f"  fit window       N in [{est.window[0]}, {est.window[1]}]")
    lines.append(f"  fit residual     {est.fit_residual:.3e}")
    lines.append(f"  cesaro tail      {est.cesaro_tail:.10g} "
                 f"(drift over top decade {est.cesaro_drift:.3e})")
    lines.append(f"  omega consistent {est.omega_consistent}")
    if expected is not None:
        rel = abs(est.slope - expected) / abs(expected)
        lines.append(f"  reference        {expected:.10g} (rel dev {rel:.2e})")
    return "\n".join(lines) + "\n"


def heat_csv(samples, meta):
    rows = [(t, v, b) for t, v, b in
            zip(samples.t, samples.values, samples.tail_bounds)]
    return csv_bytes(meta, ["t", "value", "tail_bound"], rows)


def fit_report(fit, meta, title="fit"):
    lines = [_report_head(title, meta)]
    for (e, lg), c in sorted(fit.coefficients.items()):
        name = f"t^{e:g}" + (" * ln t" if lg else "")
        lines.append(f"  {name:<16} {c: .12g}")
    lines.append(f"  residual (rel)   {fit.residual:.3e}")
    lines.append(f"  condition        {fit.condition:.3e}")
    lines.append(f"  halving delta    {fit.cross_delta:.3e}")
    return "\n".join(lines) + "\n"


def zeta_csv(result, meta):
    header_meta = dict(meta)
    header_meta.update({"sigma": repr(result.sigma),
                        "residue": repr(result.residue),
                        "entire_part": repr(result.entire_part),
                        "fit_residual": repr(result.fit.residual),
                        "fit_condition": repr(result.fit.condition),
                        "fit_halving_delta": repr(result.fit.cross_delta)})
    rows = [(e, int(lg), c)
            for (e, lg), c in sorted(result.fit.coefficients.items())]
    return csv_bytes(header_meta, ["exponent", "is_log", "coefficient"], rows)


def parametric_csv(closed, route, meta):
    rows = [("closed_form", closed.real, closed.imag),
            ("expansion_route", route.real, route.imag),
            ("difference", (route - closed).real, (route - closed).imag)]
    return csv_bytes(meta, ["route", "value_re", "value_im"], rows)


def verify_csv(results, meta):
    rows = [(r.name, int(r.passed), r.value, r.expected, r.tolerance,
             f"{r.seconds:.2f}") for r in results]
    return csv_bytes(meta, ["check", "passed", "value", "expected",
                            "tolerance", "seconds"], rows)


def _report_head(title, meta):
    extra = " ".join(f"{k}={meta[k]}" for k in sorted(meta))
    return f"ncres {__version__} :: {title} :: {extra}"
