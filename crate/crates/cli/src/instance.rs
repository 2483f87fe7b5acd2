//! Instance-file schemas: human-readable JSON with a `kind` tag and a
//! kind-specific body, converted into core types with invariant checks.

use std::sync::Arc;

use serde::Deserialize;
use wreathkit::commensurate::{CommAction, Tail, ZSubset};
use wreathkit::coxeter::{CoxEntry, CoxeterMatrix};
use wreathkit::grigorchuk::{GrigWord, Ray, SchreierSpace};
use wreathkit::groups::{FiniteGroup, Subgroup};
use wreathkit::radicals::DeclaredSubgroup;
use wreathkit::walls::Walling;
use wreathkit::wreath::{WreathElement, WreathProduct, ZCyclesSpace, ZShiftSpace};

#[derive(Debug, thiserror::Error)]
pub enum SchemaError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("schema error in {path}: {detail}")]
    Invalid { path: String, detail: String },
}

/// A parsed instance file.
#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Instance {
    Wreath(WreathInstance),
    Walls(WallsInstance),
    Commaction(CommactionInstance),
    Radical(RadicalInstanceFile),
    Coxeter(CoxeterInstance),
    Grigorchuk(GrigorchukInstance),
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Wreath(_) => "wreath",
            Instance::Walls(_) => "walls",
            Instance::Commaction(_) => "commaction",
            Instance::Radical(_) => "radical",
            Instance::Coxeter(_) => "coxeter",
            Instance::Grigorchuk(_) => "grigorchuk",
        }
    }
}

/// Reads and validates an instance file (JSON, or the plain text walling
/// format when the file starts with a `ground` header).
pub fn parse_instance(path: &str) -> Result<Instance, SchemaError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| SchemaError::Io { path: path.into(), source })?;
    if text.trim_start().starts_with("ground ") {
        let walling = Walling::from_text(&text)
            .map_err(|e| SchemaError::Invalid { path: path.into(), detail: e.to_string() })?;
        return Ok(Instance::Walls(WallsInstance::from_walling(walling)));
    }
    let instance: Instance = serde_json::from_str(&text).map_err(|e| SchemaError::Invalid {
        path: path.into(),
        detail: format!("{e} (line {}, column {})", e.line(), e.column()),
    })?;
    instance.validate().map_err(|detail| SchemaError::Invalid { path: path.into(), detail })?;
    Ok(instance)
}

impl Instance {
    fn validate(&self) -> Result<(), String> {
        match self {
            Instance::Walls(w) => {
                w.build().map(|_| ())
            }
            Instance::Wreath(w) => w.build().map(|_| ()),
            Instance::Commaction(c) => c.build().map(|_| ()),
            Instance::Radical(r) => r.build().map(|_| ()),
            Instance::Coxeter(c) => c.build().map(|_| ()),
            Instance::Grigorchuk(g) => g.build().map(|_| ()),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupDescriptor {
    Cyclic { k: usize },
    Dihedral { k: usize },
    Symmetric { n: usize },
    Product { factors: Vec<GroupDescriptor> },
    Table { table: Vec<Vec<usize>> },
}

impl GroupDescriptor {
    pub fn build(&self) -> Result<FiniteGroup, String> {
        match self {
            GroupDescriptor::Cyclic { k } => {
                if *k == 0 {
                    return Err("field k: cyclic order must be positive".into());
                }
                Ok(FiniteGroup::cyclic(*k))
            }
            GroupDescriptor::Dihedral { k } => {
                if *k == 0 {
                    return Err("field k: dihedral parameter must be positive".into());
                }
                Ok(FiniteGroup::dihedral(*k))
            }
            GroupDescriptor::Symmetric { n } => {
                FiniteGroup::symmetric(*n).map_err(|e| format!("field n: {e}"))
            }
            GroupDescriptor::Product { factors } => {
                let built: Result<Vec<FiniteGroup>, String> =
                    factors.iter().map(|f| f.build()).collect();
                let built = built?;
                built
                    .into_iter()
                    .reduce(|a, b| FiniteGroup::direct_product(&a, &b))
                    .ok_or_else(|| "field factors: product needs at least one factor".into())
            }
            GroupDescriptor::Table { table } => {
                FiniteGroup::from_table(table.clone(), None).map_err(|e| format!("field table: {e}"))
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementDescriptor {
    #[serde(default)]
    pub lamp: Vec<(i64, usize)>,
    #[serde(default)]
    pub top: i64,
    /// Top as a word over `a,b,c,d`; only for schreier instances.
    #[serde(default)]
    pub top_word: Option<String>,
}

/// The `H`-set window: `{B, A, H_kind, X_window, generators}`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WreathInstance {
    pub lamp: GroupDescriptor,
    /// Generating ids of the compact open subgroup `A ≤ B`.
    #[serde(default)]
    pub subgroup: Vec<usize>,
    pub h_kind: HKind,
    pub generators: Vec<ElementDescriptor>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum HKind {
    ZShift { window: (i64, i64) },
    ZCycles { cycles: Vec<Vec<i64>> },
    /// The automaton group acting on the orbit of a boundary ray.
    Schreier { ray: String, radius: usize },
}

pub enum BuiltWreath {
    Shift(WreathProduct<ZShiftSpace>, Subgroup, Vec<WreathElement<i64>>),
    Cycles(WreathProduct<ZCyclesSpace>, Subgroup, Vec<WreathElement<i64>>),
    Schreier(WreathProduct<SchreierSpace>, Vec<WreathElement<GrigWord>>),
}

impl WreathInstance {
    pub fn build(&self) -> Result<BuiltWreath, String> {
        let lamp = Arc::new(self.lamp.build()?);
        for &g in &self.subgroup {
            if g >= lamp.order() {
                return Err(format!("field subgroup: id {g} out of range"));
            }
        }
        let subgroup = Subgroup::generated(lamp.clone(), &self.subgroup);
        match &self.h_kind {
            HKind::ZShift { window } => {
                if window.0 > window.1 {
                    return Err("field window: lo must not exceed hi".into());
                }
                let ctx = WreathProduct::new(lamp, ZShiftSpace::new(window.0, window.1));
                let gens = build_elements(&ctx, &self.generators)?;
                Ok(BuiltWreath::Shift(ctx, subgroup, gens))
            }
            HKind::ZCycles { cycles } => {
                if cycles.is_empty() || cycles.iter().any(|c| c.is_empty()) {
                    return Err("field cycles: must be non-empty".into());
                }
                let ctx = WreathProduct::new(lamp, ZCyclesSpace::new(cycles.clone()));
                let gens = build_elements(&ctx, &self.generators)?;
                Ok(BuiltWreath::Cycles(ctx, subgroup, gens))
            }
            HKind::Schreier { ray, radius } => {
                let base = Ray::parse(ray).map_err(|e| format!("field ray: {e}"))?;
                let ctx = WreathProduct::new(lamp, SchreierSpace::new(&base, *radius));
                let gens = self
                    .generators
                    .iter()
                    .enumerate()
                    .map(|(i, d)| {
                        let top = match &d.top_word {
                            Some(word) => {
                                GrigWord::parse(word).map_err(|e| format!("field generators[{i}]: {e}"))?
                            }
                            None if d.top == 0 => GrigWord::empty(),
                            None => return Err(format!("field generators[{i}]: schreier tops are words")),
                        };
                        ctx.element(&d.lamp, top).map_err(|e| format!("field generators[{i}]: {e}"))
                    })
                    .collect::<Result<Vec<_>, String>>()?;
                Ok(BuiltWreath::Schreier(ctx, gens))
            }
        }
    }
}

fn build_elements<S: wreathkit::wreath::HSpace<Top = i64>>(
    ctx: &WreathProduct<S>,
    descriptors: &[ElementDescriptor],
) -> Result<Vec<WreathElement<i64>>, String> {
    descriptors
        .iter()
        .enumerate()
        .map(|(i, d)| {
            ctx.element(&d.lamp, d.top).map_err(|e| format!("field generators[{i}]: {e}"))
        })
        .collect()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WallsInstance {
    pub ground: usize,
    /// `[weight, bitmask]` pairs: weight `"p/q"` or integer string,
    /// bitmask a binary string with one character per ground position.
    pub walls: Vec<(String, String)>,
}

impl WallsInstance {
    fn from_walling(w: Walling) -> Self {
        let walls = w
            .walls()
            .iter()
            .map(|(mask, weight)| {
                let bits: String = (0..w.ground().len())
                    .map(|i| if mask >> i & 1 == 1 { '1' } else { '0' })
                    .collect();
                (weight.to_string(), bits)
            })
            .collect();
        WallsInstance { ground: w.ground().len(), walls }
    }

    pub fn build(&self) -> Result<Walling, String> {
        let mut text = format!("ground {}\n", self.ground);
        for (w, bits) in &self.walls {
            text.push_str(&format!("{w} {bits}\n"));
        }
        Walling::from_text(&text).map_err(|e| format!("field walls: {e}"))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommactionInstance {
    pub window: (i64, i64),
    pub m: SubsetDescriptor,
    #[serde(default)]
    pub symmetrize: bool,
    pub lamp: GroupDescriptor,
    #[serde(default)]
    pub subgroup: Vec<usize>,
    /// `ℓ₁` on the lamp group; defaults to 0 at the identity and 1 elsewhere.
    #[serde(default)]
    pub ell1: Option<Vec<u64>>,
    #[serde(default)]
    pub shifts: Vec<i64>,
    #[serde(default)]
    pub elements: Vec<ElementDescriptor>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubsetDescriptor {
    Naturals,
    #[serde(untagged)]
    Explicit {
        lo: i64,
        mask: String,
        left: TailDescriptor,
        right: TailDescriptor,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailDescriptor {
    Empty,
    Full,
    Unknown,
    #[serde(untagged)]
    Periodic(Vec<u8>),
}

impl TailDescriptor {
    fn build(&self) -> Result<Tail, String> {
        Ok(match self {
            TailDescriptor::Empty => Tail::Empty,
            TailDescriptor::Full => Tail::Full,
            TailDescriptor::Unknown => Tail::Unknown,
            TailDescriptor::Periodic(bits) => {
                if bits.is_empty() || bits.iter().any(|&b| b > 1) {
                    return Err("periodic tail must be a non-empty list of bits".into());
                }
                Tail::Periodic(bits.iter().map(|&b| b == 1).collect())
            }
        })
    }
}

impl SubsetDescriptor {
    fn build(&self, window: (i64, i64)) -> Result<ZSubset, String> {
        match self {
            SubsetDescriptor::Naturals => {
                if window.0 > 0 || window.1 < 0 {
                    return Err("field window: must contain 0 for the naturals subset".into());
                }
                Ok(ZSubset::naturals(window.0, window.1))
            }
            SubsetDescriptor::Explicit { lo, mask, left, right } => {
                let bits: Result<Vec<bool>, String> = mask
                    .chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        other => Err(format!("field m.mask: bad character {other:?}")),
                    })
                    .collect();
                let bits = bits?;
                if bits.is_empty() {
                    return Err("field m.mask: must be non-empty".into());
                }
                Ok(ZSubset::new(*lo, bits, left.build()?, right.build()?))
            }
        }
    }
}

pub struct BuiltCommaction {
    pub context: wreathkit::commensurate::PwContext,
    pub ell1: Vec<u64>,
    pub shifts: Vec<i64>,
    pub elements: Vec<WreathElement<i64>>,
}

impl CommactionInstance {
    pub fn build(&self) -> Result<BuiltCommaction, String> {
        let lamp = Arc::new(self.lamp.build()?);
        let subgroup = Subgroup::generated(lamp.clone(), &self.subgroup);
        let m = self.m.build(self.window)?;
        let mut action = CommAction::new(vec![m], self.window);
        if self.symmetrize {
            action = action.symmetrize();
        }
        let context = wreathkit::commensurate::PwContext::new(lamp.clone(), subgroup, action);
        let ell1 = match &self.ell1 {
            Some(table) => {
                if table.len() != lamp.order() || table[0] != 0 {
                    return Err("field ell1: needs one entry per element, 0 at the identity".into());
                }
                table.clone()
            }
            None => (0..lamp.order()).map(|g| u64::from(g != 0)).collect(),
        };
        let elements = build_elements(&context.wreath, &self.elements)?;
        let shifts = if self.shifts.is_empty() { (-4..=4).collect() } else { self.shifts.clone() };
        Ok(BuiltCommaction { context, ell1, shifts, elements })
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubgroupOracle {
    Trivial,
    All,
    #[serde(untagged)]
    Multiples { multiples: i64 },
}

impl SubgroupOracle {
    fn build(&self) -> Result<DeclaredSubgroup, String> {
        Ok(match self {
            SubgroupOracle::Trivial => DeclaredSubgroup::Trivial,
            SubgroupOracle::All => DeclaredSubgroup::All,
            SubgroupOracle::Multiples { multiples } => {
                if *multiples < 2 {
                    return Err("oracle multiples must be at least 2".into());
                }
                DeclaredSubgroup::ZMultiples(*multiples)
            }
        })
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadicalInstanceFile {
    pub lamp: GroupDescriptor,
    #[serde(default)]
    pub subgroup: Vec<usize>,
    pub h_kind: HKind,
    #[serde(default = "default_true")]
    pub b_compact: bool,
    pub kernel: SubgroupOracle,
    pub finite_normal_preimage: SubgroupOracle,
    pub finite_support_movers: SubgroupOracle,
    pub w_top: SubgroupOracle,
    pub b_top: SubgroupOracle,
    #[serde(default)]
    pub generators: Vec<ElementDescriptor>,
    #[serde(default)]
    pub elements: Vec<ElementDescriptor>,
    #[serde(default = "default_budget")]
    pub budget: usize,
}

fn default_true() -> bool {
    true
}

fn default_budget() -> usize {
    100_000
}

pub enum BuiltRadical {
    Shift(wreathkit::radicals::RadicalInstance<ZShiftSpace>, Vec<WreathElement<i64>>, Vec<WreathElement<i64>>, usize),
    Cycles(wreathkit::radicals::RadicalInstance<ZCyclesSpace>, Vec<WreathElement<i64>>, Vec<WreathElement<i64>>, usize),
}

impl RadicalInstanceFile {
    pub fn build(&self) -> Result<BuiltRadical, String> {
        let wreath = WreathInstance {
            lamp: self.lamp.clone(),
            subgroup: self.subgroup.clone(),
            h_kind: self.h_kind.clone(),
            generators: self.generators.clone(),
        };
        let oracles = (
            Some(self.kernel.build()?),
            Some(self.finite_normal_preimage.build()?),
            Some(self.finite_support_movers.build()?),
            Some(self.w_top.build()?),
            Some(self.b_top.build()?),
        );
        match wreath.build()? {
            BuiltWreath::Shift(product, subgroup, gens) => {
                let elements = build_elements(&product, &self.elements)?;
                let instance = wreathkit::radicals::RadicalInstance {
                    product,
                    subgroup,
                    b_compact: self.b_compact,
                    x_has_finite_orbits: false,
                    x_has_infinite_orbits: true,
                    kernel: oracles.0,
                    finite_normal_preimage: oracles.1,
                    finite_support_movers: oracles.2,
                    w_top: oracles.3,
                    b_top: oracles.4,
                };
                Ok(BuiltRadical::Shift(instance, gens, elements, self.budget))
            }
            BuiltWreath::Cycles(product, subgroup, gens) => {
                let elements = build_elements(&product, &self.elements)?;
                let instance = wreathkit::radicals::RadicalInstance {
                    product,
                    subgroup,
                    b_compact: self.b_compact,
                    x_has_finite_orbits: true,
                    x_has_infinite_orbits: false,
                    kernel: oracles.0,
                    finite_normal_preimage: oracles.1,
                    finite_support_movers: oracles.2,
                    w_top: oracles.3,
                    b_top: oracles.4,
                };
                Ok(BuiltRadical::Cycles(instance, gens, elements, self.budget))
            }
            BuiltWreath::Schreier(..) => {
                Err("field h_kind: radical instances need declared ℤ-top oracles; schreier tops are not supported".into())
            }
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoxeterInstance {
    pub window: (i64, i64),
    #[serde(default)]
    pub by_distance: Option<Vec<EntryDescriptor>>,
    #[serde(default)]
    pub default: Option<EntryDescriptor>,
    #[serde(default)]
    pub entries: Option<Vec<Vec<EntryDescriptor>>>,
    #[serde(default)]
    pub generators: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum EntryDescriptor {
    Finite(u32),
    Named(String),
}

impl EntryDescriptor {
    fn build(&self) -> Result<CoxEntry, String> {
        match self {
            EntryDescriptor::Finite(m) => Ok(CoxEntry::Finite(*m)),
            EntryDescriptor::Named(s) if s == "inf" => Ok(CoxEntry::Infinity),
            EntryDescriptor::Named(s) => Err(format!("bad entry {s:?}; use a number or \"inf\"")),
        }
    }
}

impl CoxeterInstance {
    pub fn build(&self) -> Result<CoxeterMatrix, String> {
        match (&self.by_distance, &self.entries) {
            (Some(rule), None) => {
                let by_distance: Result<Vec<CoxEntry>, String> =
                    rule.iter().map(|e| e.build()).collect();
                let default = self
                    .default
                    .as_ref()
                    .ok_or("field default: required with by_distance")?
                    .build()?;
                Ok(CoxeterMatrix::ShiftInvariant {
                    lo: self.window.0,
                    hi: self.window.1,
                    by_distance: by_distance?,
                    default,
                })
            }
            (None, Some(entries)) => {
                let built: Result<Vec<Vec<CoxEntry>>, String> = entries
                    .iter()
                    .map(|row| row.iter().map(|e| e.build()).collect())
                    .collect();
                Ok(CoxeterMatrix::Explicit { entries: built?, generators: self.generators.clone() })
            }
            _ => Err("exactly one of by_distance (with default) or entries is required".into()),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrigorchukInstance {
    #[serde(default = "default_ray")]
    pub ray: String,
    #[serde(default = "default_radius")]
    pub radius: usize,
    #[serde(default = "default_level")]
    pub level: usize,
}

fn default_ray() -> String {
    "1^inf".into()
}

fn default_radius() -> usize {
    6
}

fn default_level() -> usize {
    16
}

impl GrigorchukInstance {
    pub fn build(&self) -> Result<Ray, String> {
        Ray::parse(&self.ray).map_err(|e| format!("field ray: {e}"))
    }
}

