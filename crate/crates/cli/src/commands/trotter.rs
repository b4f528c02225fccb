use qfs_core::hamiltonian::{
    evolution_error, exact_evolution, steps_for_epsilon, trotter2_with, PauliTermSum, TrotterOrdering,
};
use qfs_core::{Error, Result};

use super::{common_echo, kv, value_name, Report};
use crate::args::{OrderingArg, TrotterArgs};
use crate::output::Table;

pub fn trotter(args: &TrotterArgs) -> Result<Report> {
    if args.r_max == 0 {
        return Err(Error::Config("r-max must be at least 1".into()));
    }
    if !args.t.is_finite() {
        return Err(Error::Config(format!("evolution time must be finite, got {}", args.t)));
    }
    let text = std::fs::read_to_string(&args.hamiltonian)?;
    let h = PauliTermSum::parse(&text)?;
    let ordering = match args.ordering {
        OrderingArg::Symmetric => TrotterOrdering::Symmetric,
        OrderingArg::Forward => TrotterOrdering::RepeatedForward,
    };

    let exact = exact_evolution(&h, args.t)?;
    let mut echo = vec![
        kv("hamiltonian", args.hamiltonian.display()),
        kv("t", args.t),
        kv("r-max", args.r_max),
        kv("ordering", value_name(&args.ordering)),
    ];
    if let Some(eps) = args.epsilon {
        echo.push(kv("epsilon", eps));
    }
    echo.extend(common_echo(&args.common));

    let mut table = Table::new("trotter", &echo, &["r", "error"]);
    table.summarize("qubits", h.n_qubits());
    table.summarize("terms", h.terms().len());
    let mut out = Report::default();
    if let Some(eps) = args.epsilon {
        let found = steps_for_epsilon(&h, args.t, eps)?;
        table.summarize("steps_for_epsilon", found.r);
        table.summarize("error_at_steps", found.error);
        table.summarize("scaling_estimate", found.scaling_estimate);
        out.line(format!("{:<20}{:>14}{:>18}", "epsilon", "search r", "scaling estimate"));
        out.line(format!("{eps:<20e}{:>14}{:>18.3}", found.r, found.scaling_estimate));
        out.line(format!("error at r = {}: {:e}", found.r, found.error));
    }

    let mut r = 1;
    while r <= args.r_max {
        let approx = trotter2_with(&h, args.t, r, ordering)?;
        table.push(vec![r.into(), evolution_error(&approx, &exact)?.into()]);
        r *= 2;
    }
    out.files
        .push(table.write(&args.common.out, "trotter", args.common.format)?);
    Ok(out)
}
