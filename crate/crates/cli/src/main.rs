mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dwork_hg::oracle::{check_condition, oracle_df, oracle_dwork};
use dwork_hg::special::psi_tilde;
use dwork_hg::{
    df_value, dwork_value, e_bound, Condition, Error, OracleBudget, PadicNum, PrecisionContext,
    RationalParam,
};
use num_bigint::BigInt;
use serde::Serialize;

use report::{base_p_digits, OutputMode, ValueReport};

#[derive(Parser)]
#[command(name = "dwork-hg", version, about = "Special values of Dwork's p-adic hypergeometric functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dwork's function F(t)/F'(t^σ) at α, with σ(t) = c t^p
    Eval {
        #[command(flatten)]
        job: Job,
        #[arg(long, default_value = "1")]
        c: BigInt,
    },
    /// F'(α)/F(α)
    Df {
        #[command(flatten)]
        job: Job,
    },
    /// Truncated-congruence evaluation (slow, exponential in n)
    Oracle {
        #[command(flatten)]
        job: Job,
        #[arg(long, default_value = "1")]
        c: BigInt,
        /// Evaluate F'/F instead of Dwork's function
        #[arg(long)]
        df: bool,
        /// Also run the fast algorithm and compare
        #[arg(long)]
        compare: bool,
        #[arg(long, default_value_t = OracleBudget::default().max_terms)]
        max_terms: u64,
    },
    /// Nonvanishing condition over the Dwork orbit at α mod p
    Check {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        a: RationalParam,
        #[arg(long)]
        b: RationalParam,
        #[arg(long, allow_hyphen_values = true)]
        alpha: BigInt,
    },
    /// Digamma-type constant ψ̃_p(i/N) mod p^n
    Digamma {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        arg: RationalParam,
        #[arg(long, value_enum, default_value = "decimal")]
        out: OutputMode,
        #[arg(long, default_value_t = 0)]
        guard: u32,
    },
    /// Time `eval` over a list of precisions
    Bench {
        #[arg(long, default_value_t = 5)]
        p: u64,
        #[arg(long, default_value = "1/2")]
        a: RationalParam,
        #[arg(long, default_value = "1/2")]
        b: RationalParam,
        #[arg(long, default_value = "2")]
        alpha: BigInt,
        #[arg(long, default_value = "1")]
        c: BigInt,
        #[arg(long = "ns", value_delimiter = ',', default_value = "25,50,100")]
        ns: Vec<u32>,
        #[arg(long, value_enum, default_value = "csv")]
        format: BenchFormat,
        #[arg(long, default_value_t = 0)]
        guard: u32,
    },
}

#[derive(Args)]
struct Job {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    a: RationalParam,
    #[arg(long)]
    b: RationalParam,
    #[arg(long, allow_hyphen_values = true)]
    alpha: BigInt,
    #[arg(long, value_enum, default_value = "decimal")]
    out: OutputMode,
    /// Extra p-adic digits of working precision
    #[arg(long, default_value_t = 0)]
    guard: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchFormat {
    Csv,
    Json,
}

enum Failure {
    Lib(Error),
    Disagree(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(f: &Failure) -> u8 {
    match f {
        Failure::Lib(e) => match e {
            Error::ConditionViolated { .. } => 3,
            Error::BudgetExceeded { .. } => 5,
            Error::InternalConsistency(_)
            | Error::DegenerateMatrix(_)
            | Error::DegenerateEigenvector
            | Error::NonInvertibleSeries => 4,
            _ => 2,
        },
        Failure::Disagree(_) => 4,
    }
}

fn residue(ctx: &PrecisionContext, x: &PadicNum) -> Result<num_bigint::BigUint, Failure> {
    Ok(ctx.residue(x, ctx.n())?)
}

impl Job {
    fn context(&self) -> Result<PrecisionContext, Failure> {
        Ok(PrecisionContext::new(self.p, self.n, self.guard)?)
    }

    fn report(
        &self,
        ctx: &PrecisionContext,
        value: &PadicNum,
        c: Option<&BigInt>,
        started: Instant,
        method: &'static str,
    ) -> Result<ValueReport, Failure> {
        let r = residue(ctx, value)?;
        Ok(ValueReport {
            p: self.p,
            n: self.n,
            a: Some(self.a.to_string()),
            b: Some(self.b.to_string()),
            alpha: Some(self.alpha.to_string()),
            c: c.map(BigInt::to_string),
            digits: base_p_digits(&r, self.p, self.n),
            value: r.to_string(),
            runtime_ms: started.elapsed().as_secs_f64() * 1e3,
            method,
        })
    }
}

fn eval(job: &Job, c: &BigInt) -> Result<String, Failure> {
    let started = Instant::now();
    let ctx = job.context()?;
    let v = dwork_value(&ctx, job.a, job.b, &ctx.from_bigint(&job.alpha), &ctx.from_bigint(c))?;
    Ok(job.report(&ctx, &v, Some(c), started, "frobenius")?.render(job.out))
}

fn df(job: &Job) -> Result<String, Failure> {
    let started = Instant::now();
    let ctx = job.context()?;
    let v = df_value(&ctx, job.a, job.b, &ctx.from_bigint(&job.alpha))?;
    Ok(job.report(&ctx, &v, None, started, "frobenius")?.render(job.out))
}

fn oracle(job: &Job, c: &BigInt, want_df: bool, compare: bool, max_terms: u64) -> Result<String, Failure> {
    let budget = OracleBudget { max_terms };
    let started = Instant::now();
    let slow = if want_df {
        oracle_df(job.p, job.a, job.b, &job.alpha, job.n, &budget)?
    } else {
        oracle_dwork(job.p, job.a, job.b, &job.alpha, c, job.n, &budget)?
    };
    let octx = PrecisionContext::fixed(job.p, job.n)?;
    let c_field = (!want_df).then_some(c);
    if !compare {
        return Ok(job.report(&octx, &slow, c_field, started, "oracle")?.render(job.out));
    }
    let ctx = job.context()?;
    let alpha = ctx.from_bigint(&job.alpha);
    let fast = if want_df {
        df_value(&ctx, job.a, job.b, &alpha)?
    } else {
        dwork_value(&ctx, job.a, job.b, &alpha, &ctx.from_bigint(c))?
    };
    let (x, y) = (residue(&ctx, &fast)?, residue(&octx, &slow)?);
    if x != y {
        return Err(Failure::Disagree(format!(
            "disagree mod {}^{}: frobenius {x}, oracle {y}",
            job.p, job.n
        )));
    }
    Ok(format!("agree mod {}^{}: {x}", job.p, job.n))
}

fn check(p: u64, a: RationalParam, b: RationalParam, alpha: &BigInt) -> Result<String, Failure> {
    PrecisionContext::fixed(p, 1)?;
    let m = BigInt::from(p);
    let r = u64::try_from(&(((alpha % &m) + &m) % &m)).expect("residue below p");
    if r == 0 || r == 1 {
        return Err(Error::InvalidPoint(format!("α ≡ {r} mod {p}")).into());
    }
    match check_condition(p, a, b, r)? {
        Condition::Holds => Ok("ok".into()),
        Condition::FailsAt(index) => Err(Error::ConditionViolated { index }.into()),
    }
}

fn digamma(p: u64, n: u32, arg: RationalParam, out: OutputMode, guard: u32) -> Result<String, Failure> {
    let started = Instant::now();
    let ctx = PrecisionContext::new(p, n, guard)?;
    let v = psi_tilde(&ctx, arg.num(), arg.den())?;
    let r = residue(&ctx, &ctx.truncate_abs(&v, n as i64))?;
    let rep = ValueReport {
        p,
        n,
        a: Some(arg.to_string()),
        b: None,
        alpha: None,
        c: None,
        digits: base_p_digits(&r, p, n),
        value: r.to_string(),
        runtime_ms: started.elapsed().as_secs_f64() * 1e3,
        method: "digamma",
    };
    Ok(rep.render(out))
}

#[derive(Serialize)]
struct BenchRow {
    n: u32,
    e_n: u64,
    degree_bound: usize,
    wall_ms: f64,
    ratio: Option<f64>,
}

#[allow(clippy::too_many_arguments)]
fn bench(
    p: u64,
    a: RationalParam,
    b: RationalParam,
    alpha: &BigInt,
    c: &BigInt,
    ns: &[u32],
    format: BenchFormat,
    guard: u32,
) -> Result<String, Failure> {
    let mut rows: Vec<BenchRow> = Vec::new();
    for &n in ns {
        let ctx = PrecisionContext::new(p, n, guard)?;
        let t = Instant::now();
        dwork_value(&ctx, a, b, &ctx.from_bigint(alpha), &ctx.from_bigint(c))?;
        let wall_ms = t.elapsed().as_secs_f64() * 1e3;
        let (e_n, degree_bound) = e_bound(p, n);
        let ratio = rows.last().map(|prev| wall_ms / prev.wall_ms);
        rows.push(BenchRow { n, e_n, degree_bound, wall_ms, ratio });
    }
    Ok(match format {
        BenchFormat::Json => serde_json::to_string(&rows).expect("plain data serializes"),
        BenchFormat::Csv => {
            let mut out = String::from("n,e_n,degree_bound,wall_ms,ratio");
            for r in &rows {
                let ratio = r.ratio.map(|x| format!("{x:.3}")).unwrap_or_default();
                out.push_str(&format!("\n{},{},{},{:.3},{ratio}", r.n, r.e_n, r.degree_bound, r.wall_ms));
            }
            out
        }
    })
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Eval { job, c } => eval(&job, &c),
        Command::Df { job } => df(&job),
        Command::Oracle { job, c, df, compare, max_terms } => oracle(&job, &c, df, compare, max_terms),
        Command::Check { p, a, b, alpha } => check(p, a, b, &alpha),
        Command::Digamma { p, n, arg, out, guard } => digamma(p, n, arg, out, guard),
        Command::Bench { p, a, b, alpha, c, ns, format, guard } => {
            bench(p, a, b, &alpha, &c, &ns, format, guard)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            match &f {
                Failure::Lib(e) => eprintln!("error: {e}"),
                Failure::Disagree(msg) => println!("{msg}"),
            }
            ExitCode::from(exit_code(&f))
        }
    }
}
