use rayon::prelude::*;
use serde_json::{json, Value};

use schinzel_core::coprime::{coprime_density, coprime_search, DEFAULT_BUDGET};
use schinzel_core::enumerate::BoxIter;
use schinzel_core::factorlab::{is_irreducible_z, kronecker_factor, KroneckerBudget};
use schinzel_core::fixdiv::{fixed_prime_divisors, removal_scalar};
use schinzel_core::hilbert::{density_over, hilbert_search, hypotheses_check, DensityReport, Enumeration, DENSITY_BUDGET};
use schinzel_core::polyschinzel::{
    check_degree_conditions, iterated_composition, schinzel_plans, sharpness_counterexample, strong_pipeline,
    verify_no_fixed_divisor_generic, CounterexampleOptions, DegreeMode, SolveOptions, StrongOptions,
};
use schinzel_core::schinzelcore::{progression_witness, verify_progression};
use schinzel_core::{Error, MPoly, Registry, VarSplit};

use crate::job::{CommandName, DegreeModeArg, EnumerationArg, JobSpec};
use crate::encode;

/// Result of a command: verdict (if the command asserts one) and payload.
pub struct Outcome {
    pub verdict: Option<bool>,
    pub result: Value,
}

/// Error carrying a partial payload.
pub struct Failure {
    pub error: Error,
    pub result: Value,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure { error, result: Value::Null }
    }
}

type Run = Result<Outcome, Failure>;

fn names(list: Option<&str>, default: &[&str]) -> Vec<String> {
    match list {
        Some(s) => s.split(',').map(|x| x.trim().to_owned()).filter(|x| !x.is_empty()).collect(),
        None => default.iter().map(|s| s.to_string()).collect(),
    }
}

struct Input {
    registry: Registry,
    split: VarSplit,
    polys: Vec<MPoly>,
}

fn input(job: &JobSpec, default_params: &[&str], default_vars: &[&str]) -> Result<Input, Error> {
    let params = names(job.params.as_deref(), default_params);
    let vars = names(job.vars.as_deref(), default_vars);
    let all: Vec<&String> = params.iter().chain(&vars).collect();
    let registry = Registry::new(&all)?;
    let split = VarSplit::new(&registry, &params, &vars)?;
    if job.polys.is_empty() {
        return Err(Error::InvalidArgument("at least one --poly is required".into()));
    }
    let polys = job.polys.iter().map(|s| MPoly::parse(s, &registry)).collect::<Result<Vec<_>, _>>()?;
    Ok(Input { registry, split, polys })
}

fn degree_matrix(job: &JobSpec) -> Result<Vec<Vec<u32>>, Error> {
    let text = job.d.as_deref().ok_or_else(|| Error::InvalidArgument("--d is required".into()))?;
    text.split(';')
        .map(|row| {
            row.split(',')
                .map(|x| x.trim().parse::<u32>().map_err(|_| Error::InvalidArgument(format!("bad degree `{x}` in --d"))))
                .collect()
        })
        .collect()
}

fn degree_row(job: &JobSpec) -> Result<Vec<u32>, Error> {
    let mut m = degree_matrix(job)?;
    if m.len() != 1 {
        return Err(Error::InvalidArgument("--d must be a single comma-separated list".into()));
    }
    Ok(m.remove(0))
}

fn enumeration(job: &JobSpec) -> Enumeration {
    match job.enumeration {
        Some(EnumerationArg::Box) => Enumeration::Box(job.n.unwrap_or(10)),
        _ => Enumeration::Spiral,
    }
}

fn product(polys: &[MPoly]) -> MPoly {
    polys.iter().skip(1).fold(polys[0].clone(), |acc, p| &acc * p)
}

pub fn dispatch(command: CommandName, job: &JobSpec) -> Run {
    match command {
        CommandName::Fixdiv => fixdiv(job),
        CommandName::Irred => irred(job),
        CommandName::Hilbert => hilbert(job),
        CommandName::Progression => progression(job),
        CommandName::Schinzel => schinzel(job),
        CommandName::Strong => strong(job),
        CommandName::Compose => compose(job),
        CommandName::Counterexample => counterexample(job),
        CommandName::Coprime => coprime(job),
        CommandName::Density => density(job),
    }
}

fn fixdiv(job: &JobSpec) -> Run {
    let inp = input(job, &["T"], &["Y"])?;
    let pi = product(&inp.polys);
    let report = fixed_prime_divisors(&pi, &inp.split)?;
    Ok(Outcome {
        verdict: Some(report.is_empty()),
        result: json!({
            "product": pi.to_string(),
            "fixed_divisors": encode::fixed(&report),
            "removal_scalar": encode::int(&removal_scalar(&pi, &inp.split)?),
        }),
    })
}

fn irred(job: &JobSpec) -> Run {
    let inp = input(job, &[], &["Y"])?;
    let mut entries = Vec::new();
    let mut all = true;
    for p in &inp.polys {
        let (over_z, cert) = is_irreducible_z(p)?;
        all &= cert.is_irreducible();
        entries.push(json!({
            "poly": p.to_string(),
            "content": encode::int(&p.content()),
            "irreducible_over_q": cert.is_irreducible(),
            "irreducible_over_z": over_z,
            "certificate": encode::certificate(&cert, &inp.registry),
        }));
    }
    Ok(Outcome { verdict: Some(all), result: json!({ "polys": entries }) })
}

fn hilbert(job: &JobSpec) -> Run {
    let inp = input(job, &["T"], &["Y"])?;
    let hyp = hypotheses_check(&inp.polys, &inp.split)?;
    let limit = job.limit.unwrap_or(1);
    let mut search = hilbert_search(&inp.polys, &inp.split, enumeration(job), job.budget.unwrap_or(10_000))?;
    let mut members = Vec::new();
    let mut error = None;
    while (members.len() as u64) < limit {
        match search.next() {
            Some(Ok(p)) => members.push(encode::point(&p, &inp.registry)),
            Some(Err(e)) => {
                error = Some(e);
                break;
            }
            None => break,
        }
    }
    let found = members.len() as u64;
    let result = json!({
        "hypotheses": encode::hypotheses(&hyp),
        "members": members,
        "examined": search.examined(),
        "cursor": search.cursor().map(encode::cursor),
    });
    match error {
        Some(e) => Err(Failure { error: e, result }),
        None if found < limit => Err(Failure {
            error: Error::BudgetExceeded(format!("found {found} of {limit} members")),
            result,
        }),
        None => Ok(Outcome { verdict: Some(true), result }),
    }
}

fn progression(job: &JobSpec) -> Run {
    let inp = input(job, &["T"], &["Y"])?;
    let w = progression_witness(&inp.polys, &inp.split)?;
    let n = job.n.unwrap_or(10);
    let report = verify_progression(&inp.polys, &inp.split, &w, -n..=n)?;
    let failures: Vec<Value> = report
        .entries
        .iter()
        .filter_map(|e| e.failure.as_ref().map(|f| json!({ "ell": e.ell, "t1": encode::int(&e.t1), "failure": f })))
        .collect();
    Ok(Outcome {
        verdict: Some(report.all_pass()),
        result: json!({
            "param": inp.registry.name(w.param),
            "delta": encode::int(&w.delta),
            "bad_primes": encode::ints(&w.bad_primes),
            "omega": encode::int(&w.omega),
            "alpha": encode::int(w.alpha()),
            "base_point": encode::ints(&w.base_point),
            "checked": report.entries.len(),
            "range": [-n, n],
            "failures": failures,
        }),
    })
}

fn schinzel(job: &JobSpec) -> Run {
    let inp = input(job, &["T"], &["Y"])?;
    let d = degree_matrix(job)?;
    let options = SolveOptions {
        budget: job.budget.unwrap_or(10_000),
        exact_degree: !job.relaxed_degree,
        mode: match job.mode {
            Some(DegreeModeArg::General) => DegreeMode::General,
            _ => DegreeMode::NearUfd,
        },
    };
    let search = match schinzel_plans(&inp.polys, &inp.split, &d, &options) {
        Ok(s) => s,
        Err(Error::Refused(diag)) => {
            let result = encode::diagnosis(&diag);
            return Err(Failure { error: Error::Refused(diag), result });
        }
        Err(e) => return Err(e.into()),
    };
    let gs = search.generic().clone();
    let generic = json!({
        "registry": gs.registry.names(),
        "family": encode::polys(&gs.family),
        "fixed_divisors": encode::fixed(&verify_no_fixed_divisor_generic(&gs)?),
    });
    let conds = check_degree_conditions(&inp.polys, &inp.split, &d, options.mode)?;
    let limit = job.limit.unwrap_or(1) as usize;
    let mut plans = Vec::new();
    for plan in search.take(limit) {
        plans.push(encode::plan(&plan?, &inp.registry));
    }
    let found = plans.len();
    let result = json!({ "conditions": encode::conditions(&conds), "generic": generic, "plans": plans });
    if found < limit {
        return Err(Failure {
            error: Error::BudgetExceeded(format!("found {found} of {limit} plans within {} tuples", options.budget)),
            result,
        });
    }
    Ok(Outcome { verdict: Some(true), result })
}

fn strong_options(job: &JobSpec) -> StrongOptions {
    StrongOptions { budget: job.budget.unwrap_or(10_000), monic: job.monic }
}

fn strong(job: &JobSpec) -> Run {
    let inp = input(job, &["T"], &["Y"])?;
    let d = degree_row(job)?;
    let s = strong_pipeline(&inp.polys, &inp.split, &d, &strong_options(job))?;
    Ok(Outcome { verdict: Some(true), result: encode::strong(&s, &inp.registry) })
}

fn compose(job: &JobSpec) -> Run {
    let inp = input(job, &["T"], &["Y"])?;
    let degrees = degree_row(job)?;
    let stages = iterated_composition(&inp.polys, &inp.split, &degrees, &strong_options(job))?;
    let stages: Vec<Value> = stages
        .iter()
        .map(|s| {
            json!({
                "stage": s.stage,
                "substitution": s.pipeline.plan.substitutions[0].to_string(),
                "bad_primes": encode::ints(&s.pipeline.bad_primes),
                "theta": encode::int(&s.pipeline.theta),
                "omega": encode::int(&s.pipeline.omega),
                "composition": s.composition.to_string(),
                "family": encode::polys(&s.family),
                "fixed_divisors": encode::fixed(&s.fixed_divisors),
            })
        })
        .collect();
    Ok(Outcome { verdict: Some(true), result: json!({ "stages": stages }) })
}

fn counterexample(job: &JobSpec) -> Run {
    let d = degree_row(job)?;
    let [d] = d[..] else {
        return Err(Error::InvalidArgument("--d must be a single degree".into()).into());
    };
    let defaults = CounterexampleOptions::default();
    let options = CounterexampleOptions {
        max_shift: job.budget.unwrap_or(defaults.max_shift),
        samples: job.samples.unwrap_or(defaults.samples),
        seed: job.seed.unwrap_or(defaults.seed),
        coeff_bound: job.n.unwrap_or(defaults.coeff_bound),
    };
    let b = sharpness_counterexample(d, &options)?;
    let reg = b.p.registry().clone();
    let oracle = match kronecker_factor(&b.p, &KroneckerBudget::default()) {
        Ok(f) => json!({ "irreducible": f.is_irreducible_over_q() }),
        Err(e) if e.is_budget() => json!({ "skipped": e.to_string() }),
        Err(e) => return Err(e.into()),
    };
    let mut histogram = vec![0u64; b.family.len()];
    for s in &b.samples {
        histogram[s.residue_index] += 1;
    }
    let even = b.samples.iter().filter(|s| num_integer::Integer::is_even(&s.content)).count();
    let all_even = b.all_samples_even();
    Ok(Outcome {
        verdict: Some(all_even),
        result: json!({
            "d": b.d,
            "family": encode::polys(&b.family),
            "p0": b.p0.to_string(),
            "shift": b.shift,
            "p": b.p.to_string(),
            "deg_t": b.p.degree_in(0),
            "certificate": encode::certificate(&b.certificate, &reg),
            "oracle": oracle,
            "samples": {
                "count": b.samples.len(),
                "seed": options.seed,
                "coeff_bound": options.coeff_bound,
                "even_content": even,
                "all_even": all_even,
                "residue_histogram": histogram,
            },
        }),
    })
}

fn coprime(job: &JobSpec) -> Run {
    let inp = input(job, &["T1"], &[])?;
    if let Some(n) = job.n.filter(|_| job.enumeration.is_none()) {
        let (hits, total) = coprime_density(&inp.polys, n)?;
        return Ok(Outcome { verdict: None, result: json!({ "N": n, "coprime": hits, "total": total }) });
    }
    let r = coprime_search(&inp.polys, &enumeration(job), job.budget.unwrap_or(DEFAULT_BUDGET))?;
    Ok(Outcome { verdict: Some(true), result: encode::coprime(&r) })
}

fn density(job: &JobSpec) -> Run {
    let inp = input(job, &["T"], &["Y"])?;
    let n = job.n.unwrap_or(10);
    if n < 0 {
        return Err(Error::InvalidArgument("--N must be non-negative".into()).into());
    }
    let k = inp.split.k();
    if BoxIter::size(k, n) > DENSITY_BUDGET {
        return Err(Error::BudgetExceeded(format!("box of radius {n} in dimension {k} exceeds {DENSITY_BUDGET} points")).into());
    }
    // One slice per value of the first parameter, merged in box order.
    let slices: Vec<Result<DensityReport, Error>> = (-n..=n)
        .into_par_iter()
        .map(|t0| {
            let points = BoxIter::new(k - 1, n).map(move |rest| {
                let mut t = vec![t0];
                t.extend(rest);
                t
            });
            density_over(&inp.polys, &inp.split, points)
        })
        .collect();
    let mut report = DensityReport::default();
    for s in slices {
        report = report.merge(s?);
    }
    Ok(Outcome { verdict: None, result: json!({ "N": n, "density": encode::density(&report) }) })
}

