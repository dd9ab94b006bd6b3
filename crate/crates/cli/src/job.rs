//! Job specification shared by command-line flags and TOML job files.

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandName {
    Fixdiv,
    Irred,
    Hilbert,
    Progression,
    Schinzel,
    Strong,
    Compose,
    Counterexample,
    Coprime,
    Density,
}

impl CommandName {
    pub fn as_str(self) -> &'static str {
        match self {
            CommandName::Fixdiv => "fixdiv",
            CommandName::Irred => "irred",
            CommandName::Hilbert => "hilbert",
            CommandName::Progression => "progression",
            CommandName::Schinzel => "schinzel",
            CommandName::Strong => "strong",
            CommandName::Compose => "compose",
            CommandName::Counterexample => "counterexample",
            CommandName::Coprime => "coprime",
            CommandName::Density => "density",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegreeModeArg {
    General,
    NearUfd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnumerationArg {
    Spiral,
    Box,
}

/// One reproducible job. Every field is optional so that a job file can be
/// completed or overridden from the command line.
#[derive(Parser, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[command(name = "schinzel", version, about = "Fixed divisors, Hilbert specialization and Schinzel substitutions over Z")]
#[serde(default, deny_unknown_fields)]
pub struct JobSpec {
    /// Operation to run.
    #[arg(value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<CommandName>,

    /// Polynomial expression; repeat for families.
    #[arg(long = "poly", visible_alias = "polys")]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub polys: Vec<String>,

    /// Comma-separated parameter names.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<String>,

    /// Comma-separated variable names.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vars: Option<String>,

    /// Degrees: comma-separated per parameter, semicolon-separated across parameters.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<String>,

    /// Number of results to produce.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit: Option<u64>,

    /// Search budget (points, tuples or shifts examined).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,

    /// Box radius or progression range.
    #[arg(long = "N")]
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,

    /// Seed for randomized sampling.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,

    /// Number of random samples.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,

    /// Degree condition (c) variant.
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<DegreeModeArg>,

    /// Point enumeration for searches.
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub enumeration: Option<EnumerationArg>,

    /// Constrain the top coefficient of the substitution to 1.
    #[arg(long)]
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub monic: bool,

    /// Allow substitutions of lower degree than requested.
    #[arg(long)]
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub relaxed_degree: bool,

    /// Worker threads; results do not depend on it.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,

    /// Also write the report to this file.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,

    /// TOML job file with the same keys as the flags.
    #[arg(long)]
    #[serde(skip)]
    pub job: Option<PathBuf>,
}

impl JobSpec {
    /// Fills every unset field from `base`.
    pub fn or(self, base: JobSpec) -> JobSpec {
        JobSpec {
            command: self.command.or(base.command),
            polys: if self.polys.is_empty() { base.polys } else { self.polys },
            params: self.params.or(base.params),
            vars: self.vars.or(base.vars),
            d: self.d.or(base.d),
            limit: self.limit.or(base.limit),
            budget: self.budget.or(base.budget),
            n: self.n.or(base.n),
            seed: self.seed.or(base.seed),
            samples: self.samples.or(base.samples),
            mode: self.mode.or(base.mode),
            enumeration: self.enumeration.or(base.enumeration),
            monic: self.monic || base.monic,
            relaxed_degree: self.relaxed_degree || base.relaxed_degree,
            threads: self.threads.or(base.threads),
            out: self.out.or(base.out),
            job: None,
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("job specs always serialize")
    }

    pub fn from_toml(text: &str) -> Result<JobSpec, toml::de::Error> {
        toml::from_str(text)
    }
}
