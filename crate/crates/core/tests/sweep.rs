use twistforge::verify::{run_sweep, sweep_specs, RepChoice, SuiteOptions};

#[test]
fn classical_sweep_passes_in_defining_rep() {
    let specs = sweep_specs(5);
    let names: Vec<_> = specs.iter().map(|(n, _)| n.as_str()).collect();
    assert!(names.contains(&"sl(6)") && names.contains(&"so(9)") && names.contains(&"so(10)"));
    let opts = SuiteOptions { rep: RepChoice::Defining, timing: false, incomplete: true };
    for (name, res) in run_sweep(&specs, opts) {
        let reports = res.unwrap_or_else(|e| panic!("{name}: {e}"));
        for r in reports {
            assert!(r.pass, "{name} {} {:?}", r.check, r.detail);
        }
    }
}
