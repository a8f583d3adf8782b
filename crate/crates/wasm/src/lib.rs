//! Browser bindings. Each export takes plain strings and numbers and returns
//! a JSON document (the same format the CLI writes) or an error message.

use ipstar::semigroup::{report, DEFAULT_ORDER_CAP};
use ipstar::{
    hindman_finite, ip_star_refute, parse_spec, parse_table, run_search, Coloring, DocKind,
    Document, Execution, SearchBudget, Sequence,
};
use num_bigint::BigUint;
use wasm_bindgen::prelude::*;

/// Node limit for searches started from the page; keeps the tab responsive.
pub const DEMO_NODE_LIMIT: u64 = 2_000_000;

fn msg<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Whitespace or comma separated positive integers.
fn parse_terms(text: &str) -> Result<Sequence, String> {
    let terms = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<BigUint>().map_err(|_| format!("bad term {t:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    Sequence::new(terms).map_err(msg)
}

pub fn search(terms: &str, spec: &str, depth: usize, max_block: usize) -> Result<String, String> {
    let x = parse_terms(terms)?;
    let target = parse_spec(spec).map_err(msg)?;
    let budget = SearchBudget::new(depth, x.len(), max_block, DEMO_NODE_LIMIT);
    let run = run_search(&x, &target, budget, Execution::Sequential).map_err(msg)?;
    Ok(Document::from_search(&run, &target.to_string(), budget).to_json())
}

pub fn hindman(colors: &str, depth: usize) -> Result<String, String> {
    let colors = colors
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u32>().map_err(|_| format!("bad colour {t:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    let c = Coloring::from_colors(colors).map_err(msg)?;
    let found = hindman_finite(&c, depth).map_err(msg)?;
    Ok(Document::from_hindman(&c, depth, found.as_ref()).to_json())
}

pub fn refute(spec: &str, depth: usize, bound: u64) -> Result<String, String> {
    let a = parse_spec(spec).map_err(msg)?;
    let w = ip_star_refute(&a, depth, bound).map_err(msg)?;
    Ok(Document::from_witness(
        DocKind::IpStarRefutation,
        &a.to_string(),
        depth,
        bound,
        w.as_ref(),
    )
    .to_json())
}

pub fn semigroup(table: &str) -> Result<String, String> {
    let s = parse_table(table).map_err(msg)?;
    let r = report(&s, DEFAULT_ORDER_CAP).map_err(msg)?;
    let value = serde_json::to_value(&r).map_err(msg)?;
    Ok(Document::from_report(value).to_json())
}

#[wasm_bindgen(js_name = search)]
pub fn search_js(
    terms: &str,
    spec: &str,
    depth: usize,
    max_block: usize,
) -> Result<String, JsError> {
    search(terms, spec, depth, max_block).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = hindman)]
pub fn hindman_js(colors: &str, depth: usize) -> Result<String, JsError> {
    hindman(colors, depth).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = refute)]
pub fn refute_js(spec: &str, depth: usize, bound: u32) -> Result<String, JsError> {
    refute(spec, depth, bound as u64).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = semigroup)]
pub fn semigroup_js(table: &str) -> Result<String, JsError> {
    semigroup(table).map_err(|e| JsError::new(&e))
}
