"""Run the four numerical verification suites and summarize the results.

quadratic-oracle   root-finding g^2 vs the closed form on 200 random models
grad-formulas      endpoint-formula derivatives of g^2 vs finite differences
hessian-stability  hess(g^2) near a saddle vs the quadratic-model reference
convexity          midpoint-convexity probes and the shrinking-region effect
"""

from mtnpass import run_suite

for name in ("quadratic-oracle", "grad-formulas", "hessian-stability",
             "convexity"):
    report = run_suite(name, seed=0)
    status = "PASS" if report["failures"] == 0 else "FAIL"
    print(f"=== {name}: {status} ===")
    if name == "quadratic-oracle":
        print(f"  {report['n_models']} models, max rel err "
              f"{report['max_rel_err']:.2e}")
    elif name == "grad-formulas":
        print(f"  {report['n_cases']} samples ({report['n_skipped']} skipped)")
        print(f"  max rel grad err {report['max_rel_grad_err']:.2e}, "
              f"max rel hess err {report['max_rel_hess_err']:.2e}")
    elif name == "hessian-stability":
        comps = [c for c in report["camel"]["comparisons"]
                 if c["v_label"] == "aligned"]
        print("  camel origin, aligned direction:")
        for c in comps:
            print(f"    scale {c['scale']:.6f}: deviation "
                  f"{c['deviation']:.3e} ({c['deviation']/c['href_norm']:.2e}"
                  f" of |H_ref|)")
        quad_devs = {c["deviation"] for c in report["quadratic"]["comparisons"]}
        print(f"  exact quadratic deviations: {sorted(quad_devs)}")
    elif name == "convexity":
        print(f"  quadratic probe: {report['quadratic']['n_violations']} "
              f"violations, min reduced eigenvalue "
              f"{report['quadratic']['min_reduced_eig']:.3f}")
        print(f"  camel probe: {report['camel']['n_violations']} violations")
        print("  largest violation-free radius as the level rises to 0:")
        for lvl, r in sorted(report["tightness_sweep"].items(),
                             key=lambda kv: float(kv[0])):
            print(f"    level {lvl}: radius {r}")
    print()
