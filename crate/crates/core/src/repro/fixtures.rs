//! Bundled input data, parsed on demand.

use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::eoq::EoqScenario;
use crate::error::{Error, Result};
use crate::horizon::{HorizonParams, TableRow};
use crate::stats::{AttributeSummary, SrsSummary, StratifiedPopulation, StratumInput};

const STRATIFIED: &str = include_str!("../../data/stratified_six_strata.json");
const SRS: &str = include_str!("../../data/srs_populations.json");
const ATTR_SINGLE: &str = include_str!("../../data/attribute_single_phase.json");
const ATTR_TWO: &str = include_str!("../../data/attribute_two_phase.json");
const EOQ: &str = include_str!("../../data/eoq_example.json");
const HORIZON: &str = include_str!("../../data/horizon_example.json");

/// Raw fixture documents by name, for export and inspection.
pub const DOCUMENTS: [(&str, &str); 6] = [
    ("stratified_six_strata", STRATIFIED),
    ("srs_populations", SRS),
    ("attribute_single_phase", ATTR_SINGLE),
    ("attribute_two_phase", ATTR_TWO),
    ("eoq_example", EOQ),
    ("horizon_example", HORIZON),
];

fn parse<T: DeserializeOwned>(name: &str, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Config(format!("fixture {name}: {e}")))
}

#[derive(Debug, Clone, Deserialize)]
pub struct StratifiedFixture {
    pub strata: Vec<StratumInput>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct Pair<T> {
    pub pop1: T,
    pub pop2: T,
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct EoqFixture {
    #[serde(flatten)]
    pub scenario: EoqScenario,
    /// Reported no-release order quantity, used to back out the unstated
    /// per-unit transport cost.
    pub reported_no_release_q: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct HorizonFixture {
    pub params: HorizonParams,
    pub table: Vec<TableRow>,
    pub after_crossover: [f64; 2],
    pub after_mutation: f64,
}

pub fn stratified() -> Result<StratifiedPopulation> {
    let f: StratifiedFixture = parse("stratified", STRATIFIED)?;
    StratifiedPopulation::from_inputs(&f.strata)
}

pub fn srs() -> Result<Pair<SrsSummary>> {
    parse("srs", SRS)
}

pub fn attribute_single_phase() -> Result<Pair<AttributeSummary>> {
    parse("attribute single phase", ATTR_SINGLE)
}

pub fn attribute_two_phase() -> Result<Pair<AttributeSummary>> {
    parse("attribute two phase", ATTR_TWO)
}

pub fn eoq() -> Result<EoqFixture> {
    parse("eoq", EOQ)
}

pub fn horizon() -> Result<HorizonFixture> {
    parse("horizon", HORIZON)
}
