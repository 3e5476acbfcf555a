//! Workspace files.
//!
//! A workspace is a TOML document with a `[model]` table and named
//! `[spaces.*]`, `[attributes.*]` and `[experiments.*]` tables, plus an
//! optional `[joint]` table. Tabular data may live in CSV files referenced
//! relative to the workspace file:
//!
//! ```toml
//! [model]
//! rule = "simple_fuzzy"
//! tnorm = "min"
//!
//! [spaces.arrival]
//! kind = "interval_table"
//! csv = "onset_days.csv"          # columns center,width,prob
//!
//! [spaces.coin]
//! kind = "pmf"
//! atoms = [[0, 0.4], [1, 0.6]]
//!
//! [spaces.u]
//! kind = "mixed"
//! density = { kind = "uniform", lo = 0, hi = 1 }
//!
//! [attributes.early]
//! space = "arrival"
//! breakpoints = [[0, 1], [40, 1], [100, 0], [199, 0]]
//! base = 100
//!
//! [experiments.dose]
//! treatment = "dose"
//! low = "low"
//! medium = "medium"
//! high = "high"
//! outcome = [[0, 0.0], [9, 1.0]]   # or outcome_csv = "curve.csv" with columns t,p
//! n_units = 10000
//! seed = 7
//! ```
//!
//! Loading inlines every CSV reference, which gives the canonical form that
//! [`Workspace::to_toml`] writes back and that the digest is computed over.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::causal::{default_base, Level, PotentialOutcomeModel, TreatmentSpace};
use crate::discrete::JointSpec;
use crate::dist::DiscreteDist;
use crate::error::{PflError, Result};
use crate::fuzzy::{FuzzyAttribute, MembershipFunction, TNorm};
use crate::mixed::{Density, DensitySpec, MixedDist, SelectionField};
use crate::selection::{AttributeBinding, ConditionalScaling, ExponentTable, SelectionModel, SelectionRule};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceFile {
    pub model: ModelSpec,
    #[serde(default)]
    pub joint: JointSpec,
    #[serde(default)]
    pub spaces: BTreeMap<String, SpaceSpec>,
    #[serde(default)]
    pub attributes: BTreeMap<String, AttributeSpec>,
    #[serde(default)]
    pub experiments: BTreeMap<String, ExperimentSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleName {
    Classic,
    ClassicProbBased,
    SimpleFuzzy,
    RelativeFuzzy,
    MembershipScaled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub rule: RuleName,
    /// Attribute names competing with each other under `relative_fuzzy`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub siblings: Vec<String>,
    pub tnorm: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<ExponentTable>,
    #[serde(default = "standard_scaling")]
    pub scaling: ConditionalScaling,
}

fn standard_scaling() -> ConditionalScaling {
    ConditionalScaling::Standard
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceSpec {
    /// Explicit (value, prob) atoms, inline or from a value,prob CSV.
    Pmf {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        atoms: Option<Vec<(f64, f64)>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        csv: Option<String>,
    },
    /// (center, width, prob) rows spread uniformly over integer atoms.
    IntervalTable {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rows: Option<Vec<(f64, f64, f64)>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        csv: Option<String>,
    },
    Uniform {
        values: Vec<f64>,
    },
    Bernoulli {
        p: f64,
    },
    /// Density plus point atoms.
    Mixed {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        density: Option<DensitySpec>,
        #[serde(default)]
        atoms: Vec<(f64, f64)>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttributeSpec {
    pub space: String,
    pub breakpoints: Vec<(f64, f64)>,
    /// Must match the first and last breakpoints when given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<(f64, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub treatment: String,
    pub low: String,
    pub medium: String,
    pub high: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<Vec<(f64, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome_csv: Option<String>,
    /// Zero skips the Monte Carlo run.
    #[serde(default)]
    pub n_units: usize,
    #[serde(default)]
    pub seed: u64,
}

/// A resolved space.
#[derive(Debug, Clone)]
pub enum Space {
    Discrete(DiscreteDist),
    Mixed(MixedDist),
}

/// A resolved attribute with the name of its space.
#[derive(Debug, Clone)]
pub struct Attribute {
    pub attr: FuzzyAttribute,
    pub space: String,
    pub base: Option<f64>,
}

/// A loaded and validated workspace.
#[derive(Debug, Clone)]
pub struct Workspace {
    pub file: WorkspaceFile,
    pub model: SelectionModel,
    pub spaces: BTreeMap<String, Space>,
    pub attributes: BTreeMap<String, Attribute>,
    pub digest: String,
}

fn read_csv<T: serde::de::DeserializeOwned>(dir: &Path, name: &str, columns: &[&str]) -> Result<Vec<T>> {
    let path: PathBuf = dir.join(name);
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(&path)
        .map_err(|e| PflError::Parse(format!("{}: {e}", path.display())))?;
    let headers = reader.headers().map_err(|e| PflError::Parse(format!("{}: {e}", path.display())))?;
    let got: Vec<&str> = headers.iter().collect();
    if got != columns {
        return Err(PflError::Parse(format!(
            "{}: expected columns {}, found {}",
            path.display(),
            columns.join(","),
            got.join(",")
        )));
    }
    reader
        .deserialize()
        .enumerate()
        .map(|(i, row)| row.map_err(|e| PflError::Parse(format!("{} line {}: {e}", path.display(), i + 2))))
        .collect()
}

fn inline_or_csv<T: serde::de::DeserializeOwned>(
    dir: &Path,
    what: &str,
    inline: &mut Option<Vec<T>>,
    csv: &mut Option<String>,
    columns: &[&str],
) -> Result<()> {
    match (inline.is_some(), csv.take()) {
        (true, Some(_)) => Err(PflError::Validation(format!("{what} gives both inline data and a CSV file"))),
        (false, None) => Err(PflError::Validation(format!("{what} gives neither inline data nor a CSV file"))),
        (false, Some(name)) => {
            *inline = Some(read_csv(dir, &name, columns)?);
            Ok(())
        }
        (true, None) => Ok(()),
    }
}

impl WorkspaceFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| PflError::Parse(e.to_string()))
    }

    /// Replaces every CSV reference by its contents.
    fn inline_csv(&mut self, dir: &Path) -> Result<()> {
        for (name, space) in self.spaces.iter_mut() {
            let what = format!("space '{name}'");
            match space {
                SpaceSpec::Pmf { atoms, csv } => inline_or_csv(dir, &what, atoms, csv, &["value", "prob"])?,
                SpaceSpec::IntervalTable { rows, csv } => {
                    inline_or_csv(dir, &what, rows, csv, &["center", "width", "prob"])?
                }
                _ => {}
            }
        }
        for (name, e) in self.experiments.iter_mut() {
            let what = format!("outcome curve of experiment '{name}'");
            inline_or_csv(dir, &what, &mut e.outcome, &mut e.outcome_csv, &["t", "p"])?;
        }
        Ok(())
    }
}

fn build_model(spec: &ModelSpec, attrs: &BTreeMap<String, Attribute>) -> Result<SelectionModel> {
    let tnorm: TNorm = spec.tnorm.parse()?;
    let rule = match spec.rule {
        RuleName::Classic => SelectionRule::Classic,
        RuleName::ClassicProbBased => SelectionRule::ClassicProbBased,
        RuleName::SimpleFuzzy => SelectionRule::SimpleFuzzy,
        RuleName::MembershipScaled => SelectionRule::MembershipScaled,
        RuleName::RelativeFuzzy => SelectionRule::RelativeFuzzy {
            siblings: spec
                .siblings
                .iter()
                .map(|s| {
                    attrs
                        .get(s)
                        .map(|a| a.attr.clone())
                        .ok_or_else(|| PflError::Validation(format!("sibling '{s}' is not a declared attribute")))
                })
                .collect::<Result<_>>()?,
        },
    };
    if spec.rule != RuleName::RelativeFuzzy && !spec.siblings.is_empty() {
        return Err(PflError::Validation("siblings are only used by the relative_fuzzy rule".into()));
    }
    let mut model = SelectionModel::new(rule, tnorm).with_scaling(spec.scaling.clone());
    if let Some(e) = &spec.exponent {
        model = model.with_exponent(e.clone());
    }
    model.validate()?;
    Ok(model)
}

fn build_space(spec: &SpaceSpec) -> Result<Space> {
    Ok(match spec {
        SpaceSpec::Pmf { atoms, .. } => Space::Discrete(DiscreteDist::new(atoms.clone().unwrap_or_default())?),
        SpaceSpec::IntervalTable { rows, .. } => {
            Space::Discrete(DiscreteDist::from_interval_table(rows.as_deref().unwrap_or_default())?)
        }
        SpaceSpec::Uniform { values } => Space::Discrete(DiscreteDist::uniform(values.iter().copied())?),
        SpaceSpec::Bernoulli { p } => {
            if !(0.0..=1.0).contains(p) {
                return Err(PflError::Validation(format!("Bernoulli parameter {p} is not in [0, 1]")));
            }
            Space::Discrete(DiscreteDist::bernoulli(*p)?)
        }
        SpaceSpec::Mixed { density, atoms } => {
            let density = density.as_ref().map(Density::from_spec).transpose()?;
            Space::Mixed(MixedDist::new(density, atoms.clone())?)
        }
    })
}

fn build_attribute(name: &str, spec: &AttributeSpec) -> Result<FuzzyAttribute> {
    let mf = MembershipFunction::new(spec.breakpoints.clone())?;
    if let Some((lo, hi)) = spec.domain {
        if mf.domain() != (lo, hi) {
            return Err(PflError::Validation(format!(
                "attribute '{name}': domain [{lo}, {hi}] does not match the breakpoints {:?}",
                mf.domain()
            )));
        }
    }
    FuzzyAttribute::new(name, mf)
}

impl Workspace {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| PflError::Parse(format!("{}: {e}", path.display())))?;
        let dir = path.parent().unwrap_or(Path::new("."));
        Self::from_toml(&text, dir).map_err(|e| match e {
            PflError::Parse(m) => PflError::Parse(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Parses a workspace whose CSV references are relative to `dir`.
    pub fn from_toml(text: &str, dir: &Path) -> Result<Self> {
        let mut file = WorkspaceFile::parse(text)?;
        file.inline_csv(dir)?;
        Self::from_file(file)
    }

    /// Resolves and validates a workspace whose CSV references are already inlined.
    pub fn from_file(mut file: WorkspaceFile) -> Result<Self> {
        // canonical t-norm spelling, so equivalent workspaces share a digest
        file.model.tnorm = file.model.tnorm.parse::<TNorm>()?.name();
        let mut spaces = BTreeMap::new();
        for (name, spec) in &file.spaces {
            let space = build_space(spec).map_err(|e| context(e, &format!("space '{name}'")))?;
            spaces.insert(name.clone(), space);
        }
        let mut attributes = BTreeMap::new();
        for (name, spec) in &file.attributes {
            if !spaces.contains_key(&spec.space) {
                return Err(PflError::Validation(format!("attribute '{name}' refers to unknown space '{}'", spec.space)));
            }
            let attr = build_attribute(name, spec)?;
            attributes.insert(name.clone(), Attribute { attr, space: spec.space.clone(), base: spec.base });
        }
        // a base element outside Ω joins it as a zero-mass value, shared by
        // every attribute on that space
        for a in attributes.values() {
            if let (Some(b), Some(Space::Discrete(d))) = (a.base, spaces.get_mut(&a.space)) {
                *d = d.with_value(b);
            }
        }
        let model = build_model(&file.model, &attributes)?;
        let digest = hex::encode(Sha256::digest(serde_json::to_vec(&file).expect("workspace serializes")));
        let ws = Self { file, model, spaces, attributes, digest };
        for name in ws.attributes.keys() {
            if ws.attributes[name].base.is_some() {
                ws.check_proper(name)?;
            }
        }
        for (name, e) in &ws.file.experiments {
            ws.experiment(name).map_err(|err| context(err, &format!("experiment '{name}'")))?;
            if e.n_units > 0 && e.n_units < 3 {
                return Err(PflError::Validation(format!("experiment '{name}' needs at least 3 units")));
            }
        }
        Ok(ws)
    }

    /// The canonical workspace text; loading it gives the same digest.
    pub fn to_toml(&self) -> String {
        toml::to_string(&self.file).expect("workspace serializes to TOML")
    }

    pub fn space(&self, name: &str) -> Result<&Space> {
        self.spaces.get(name).ok_or_else(|| PflError::Validation(format!("unknown space '{name}'")))
    }

    pub fn discrete(&self, name: &str) -> Result<&DiscreteDist> {
        match self.space(name)? {
            Space::Discrete(d) => Ok(d),
            Space::Mixed(_) => Err(PflError::Validation(format!("space '{name}' is not discrete"))),
        }
    }

    /// Any space as a mixed distribution; discrete spaces become pure atoms.
    pub fn mixed(&self, name: &str) -> Result<MixedDist> {
        match self.space(name)? {
            Space::Mixed(m) => Ok(m.clone()),
            Space::Discrete(d) => MixedDist::new(None, d.atoms().to_vec()),
        }
    }

    pub fn attribute(&self, name: &str) -> Result<&Attribute> {
        self.attributes.get(name).ok_or_else(|| PflError::Validation(format!("unknown attribute '{name}'")))
    }

    fn base_of(&self, name: &str) -> Result<f64> {
        self.attribute(name)?
            .base
            .ok_or_else(|| PflError::Validation(format!("attribute '{name}' has no base element")))
    }

    /// The attribute bound to its discrete space, properness checked.
    pub fn binding(&self, name: &str) -> Result<AttributeBinding> {
        let a = self.attribute(name)?;
        let space = self.discrete(&a.space)?.clone();
        AttributeBinding::new(&self.model, a.attr.clone(), self.base_of(name)?, space)
    }

    /// Selection probability t ↦ P(t is A) on a continuous space, with the
    /// attribute's base. Only the simple fuzzy rule extends pointwise.
    pub fn field(&self, name: &str) -> Result<(SelectionField, f64)> {
        if self.model.rule != SelectionRule::SimpleFuzzy {
            return Err(PflError::Validation(
                "continuous spaces need the simple_fuzzy rule, where P(t is A) depends on t alone".into(),
            ));
        }
        let a = self.attribute(name)?;
        let base = self.base_of(name)?;
        let model = self.model.clone();
        let attr = a.attr.clone();
        let kinks: Vec<f64> = attr.membership().breakpoints().iter().map(|b| b.0).collect();
        Ok((SelectionField::from_fn(kinks, move |t| model.degree(&attr, t)), base))
    }

    fn check_proper(&self, name: &str) -> Result<()> {
        let a = self.attribute(name)?;
        match self.space(&a.space)? {
            Space::Discrete(_) => self.binding(name).map(|_| ()),
            Space::Mixed(m) => {
                let base = self.base_of(name)?;
                let p = self.model.degree(&a.attr, base);
                let (lo, hi) = m.span();
                if !(lo..=hi).contains(&base) && m.atom_mass(base) == 0.0 {
                    return Err(PflError::Validation(format!("base element {base} of '{name}' lies outside its space")));
                }
                if p != 0.0 {
                    return Err(PflError::Validation(format!(
                        "attribute '{name}' is not proper at base {base}: {}",
                        PflError::InvalidBase { base, prob: p }
                    )));
                }
                Ok(())
            }
        }
    }

    /// Treatment space and outcome curve of a named experiment.
    pub fn experiment(&self, name: &str) -> Result<(TreatmentSpace, PotentialOutcomeModel, &ExperimentSpec)> {
        let e = self
            .file
            .experiments
            .get(name)
            .ok_or_else(|| PflError::Validation(format!("unknown experiment '{name}'")))?;
        let dist = self.discrete(&e.treatment)?.clone();
        let mut attrs = Vec::new();
        let mut bases = [0.0; 3];
        for (k, (level, attr_name)) in Level::ALL.into_iter().zip([&e.low, &e.medium, &e.high]).enumerate() {
            let a = self.attribute(attr_name)?;
            if a.space != e.treatment {
                return Err(PflError::Validation(format!(
                    "attribute '{attr_name}' lives on '{}', not on the treatment space '{}'",
                    a.space, e.treatment
                )));
            }
            bases[k] = match a.base {
                Some(b) => b,
                None => default_base(level, &self.model, &dist, &a.attr)?,
            };
            attrs.push(a.attr.clone());
        }
        let attrs: [FuzzyAttribute; 3] = attrs.try_into().expect("three levels");
        let space = TreatmentSpace::new(self.model.clone(), dist, attrs, bases)?;
        let po = PotentialOutcomeModel::new(e.outcome.clone().unwrap_or_default())?;
        for t in space.dist.values() {
            po.p(t)?;
        }
        Ok((space, po, e))
    }
}

fn context(e: PflError, what: &str) -> PflError {
    match e {
        PflError::Validation(m) => PflError::Validation(format!("{what}: {m}")),
        PflError::Parse(m) => PflError::Parse(format!("{what}: {m}")),
        other => other,
    }
}
