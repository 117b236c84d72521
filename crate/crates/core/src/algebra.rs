//! Finite algebras with full operation tables, and their JSON interchange format.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Default refusal threshold for constructed carriers.
pub const DEFAULT_CAP: usize = 100_000;

/// Upper bound on the number of entries in a single operation table.
pub const TABLE_ENTRY_CAP: u128 = 200_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OpSymbol {
    pub name: String,
    pub arity: usize,
}

/// Ordered list of operation symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub ops: Vec<OpSymbol>,
}

impl Signature {
    pub fn new<S: Into<String>>(ops: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let ops: Vec<OpSymbol> = ops
            .into_iter()
            .map(|(name, arity)| OpSymbol {
                name: name.into(),
                arity,
            })
            .collect();
        for (i, a) in ops.iter().enumerate() {
            if ops[..i].iter().any(|b| b.name == a.name) {
                return Err(Error::InvalidAlgebra(format!(
                    "duplicate operation name `{}`",
                    a.name
                )));
            }
        }
        Ok(Signature { ops })
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|o| o.name == name)
    }

    pub fn max_arity(&self) -> usize {
        self.ops.iter().map(|o| o.arity).max().unwrap_or(0)
    }
}

/// An operation of a finite algebra, stored as a row-major table.
///
/// For arity `k` over a carrier of size `n` the table has `n^k` entries and
/// the entry for `(a_0, .., a_{k-1})` sits at `((a_0 * n + a_1) * n + ..)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Operation {
    pub name: String,
    pub arity: usize,
    pub table: Vec<usize>,
}

/// Optional names of the lattice operations, carried in the JSON format.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeHint {
    pub meet: String,
    pub join: String,
}

/// A finite algebra on the carrier `{0..size-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteAlgebra {
    pub name: String,
    size: usize,
    ops: Vec<Operation>,
    pub element_names: Option<Vec<String>>,
    pub lattice_hint: Option<LatticeHint>,
}

#[inline]
pub fn tuple_index(args: &[usize], n: usize) -> usize {
    args.iter().fold(0, |acc, &a| acc * n + a)
}

pub fn checked_pow(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}

/// Odometer over `{0..n-1}^k` in lexicographic order.
pub fn for_each_tuple(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let mut t = vec![0usize; k];
    if k > 0 && n == 0 {
        return;
    }
    loop {
        f(&t);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < n {
                break;
            }
            t[i] = 0;
        }
    }
}

impl FiniteAlgebra {
    /// Builds an algebra, validating table shapes and entry ranges.
    pub fn new(name: impl Into<String>, size: usize, ops: Vec<Operation>) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidAlgebra("carrier must be non-empty".into()));
        }
        for (i, op) in ops.iter().enumerate() {
            if ops[..i].iter().any(|o| o.name == op.name) {
                return Err(Error::InvalidAlgebra(format!(
                    "duplicate operation name `{}`",
                    op.name
                )));
            }
            let expected = checked_pow(size, op.arity);
            if expected != op.table.len() as u128 {
                return Err(Error::InvalidAlgebra(format!(
                    "operation `{}` of arity {} needs {} table entries, found {}",
                    op.name,
                    op.arity,
                    expected,
                    op.table.len()
                )));
            }
            if let Some(bad) = op.table.iter().find(|&&v| v >= size) {
                return Err(Error::InvalidAlgebra(format!(
                    "operation `{}` has entry {} outside carrier of size {}",
                    op.name, bad, size
                )));
            }
        }
        Ok(FiniteAlgebra {
            name: name.into(),
            size,
            ops,
            element_names: None,
            lattice_hint: None,
        })
    }

    /// Builds an operation table by evaluating `f` on every tuple.
    pub fn op_from_fn(
        name: impl Into<String>,
        size: usize,
        arity: usize,
        mut f: impl FnMut(&[usize]) -> usize,
    ) -> Operation {
        let mut table = Vec::with_capacity(checked_pow(size, arity) as usize);
        for_each_tuple(size, arity, |t| table.push(f(t)));
        Operation {
            name: name.into(),
            arity,
            table,
        }
    }

    pub fn with_element_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.size {
            return Err(Error::InvalidAlgebra(format!(
                "{} element names for carrier of size {}",
                names.len(),
                self.size
            )));
        }
        self.element_names = Some(names);
        Ok(self)
    }

    pub fn with_lattice_hint(mut self, meet: &str, join: &str) -> Self {
        self.lattice_hint = Some(LatticeHint {
            meet: meet.into(),
            join: join.into(),
        });
        self
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn ops(&self) -> &[Operation] {
        &self.ops
    }

    pub fn op(&self, i: usize) -> &Operation {
        &self.ops[i]
    }

    pub fn op_index(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|o| o.name == name)
    }

    pub fn op_by_name(&self, name: &str) -> Option<&Operation> {
        self.ops.iter().find(|o| o.name == name)
    }

    pub fn signature(&self) -> Signature {
        Signature {
            ops: self
                .ops
                .iter()
                .map(|o| OpSymbol {
                    name: o.name.clone(),
                    arity: o.arity,
                })
                .collect(),
        }
    }

    pub fn same_signature(&self, other: &FiniteAlgebra) -> bool {
        self.ops.len() == other.ops.len()
            && self
                .ops
                .iter()
                .zip(&other.ops)
                .all(|(a, b)| a.name == b.name && a.arity == b.arity)
    }

    pub fn require_same_signature(&self, other: &FiniteAlgebra) -> Result<()> {
        if self.same_signature(other) {
            Ok(())
        } else {
            Err(Error::SignatureMismatch(format!(
                "`{}` and `{}` have different signatures",
                self.name, other.name
            )))
        }
    }

    #[inline]
    pub fn apply(&self, op: usize, args: &[usize]) -> usize {
        self.ops[op].table[tuple_index(args, self.size)]
    }

    pub fn element_name(&self, x: usize) -> String {
        match &self.element_names {
            Some(names) => names[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn element_by_name(&self, name: &str) -> Option<usize> {
        self.element_names
            .as_ref()
            .and_then(|names| names.iter().position(|n| n == name))
    }

    /// Drops the named operations, keeping everything else.
    pub fn reduct(&self, name: impl Into<String>, drop: &[&str]) -> Result<FiniteAlgebra> {
        let ops = self
            .ops
            .iter()
            .filter(|o| !drop.contains(&o.name.as_str()))
            .cloned()
            .collect();
        let mut out = FiniteAlgebra::new(name, self.size, ops)?;
        out.element_names = self.element_names.clone();
        out.lattice_hint = self.lattice_hint.clone();
        Ok(out)
    }

    /// Replaces every table entry `v` by `relabel[v]` and permutes rows so that
    /// `relabel` becomes an isomorphism onto the result.
    pub fn relabeled(&self, relabel: &[usize]) -> Result<FiniteAlgebra> {
        let n = self.size;
        let mut inverse = vec![usize::MAX; n];
        for (x, &y) in relabel.iter().enumerate() {
            if y >= n || inverse[y] != usize::MAX {
                return Err(Error::InvalidInput("relabeling is not a permutation".into()));
            }
            inverse[y] = x;
        }
        let ops = self
            .ops
            .iter()
            .map(|op| {
                let mut pre = Vec::with_capacity(op.arity);
                Self::op_from_fn(op.name.clone(), n, op.arity, |t| {
                    pre.clear();
                    pre.extend(t.iter().map(|&y| inverse[y]));
                    relabel[op.table[tuple_index(&pre, n)]]
                })
            })
            .collect();
        FiniteAlgebra::new(self.name.clone(), n, ops)
    }

    pub fn to_json(&self) -> AlgebraJson {
        AlgebraJson {
            name: self.name.clone(),
            size: self.size,
            ops: self
                .ops
                .iter()
                .map(|o| OpJson {
                    name: o.name.clone(),
                    arity: o.arity,
                    table: nest_table(&o.table, self.size, o.arity),
                })
                .collect(),
            element_names: self.element_names.clone(),
            lattice: self.lattice_hint.clone(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("algebra serializes")
    }

    pub fn from_json(json: &AlgebraJson) -> Result<Self> {
        let mut ops = Vec::with_capacity(json.ops.len());
        for o in &json.ops {
            let mut table = Vec::new();
            flatten_table(&o.table, json.size, o.arity, &mut table)
                .map_err(|e| Error::InvalidAlgebra(format!("ops[{}].table: {e}", o.name)))?;
            ops.push(Operation {
                name: o.name.clone(),
                arity: o.arity,
                table,
            });
        }
        let mut alg = FiniteAlgebra::new(json.name.clone(), json.size, ops)?;
        if let Some(names) = &json.element_names {
            alg = alg.with_element_names(names.clone())?;
        }
        alg.lattice_hint = json.lattice.clone();
        Ok(alg)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let json: AlgebraJson = serde_json::from_str(s)?;
        Self::from_json(&json)
    }
}

/// Serialized form of an operation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OpJson {
    pub name: String,
    pub arity: usize,
    pub table: Value,
}

/// Serialized form of a [`FiniteAlgebra`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub name: String,
    pub size: usize,
    pub ops: Vec<OpJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element_names: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeHint>,
}

fn nest_table(flat: &[usize], n: usize, arity: usize) -> Value {
    if arity == 0 {
        return Value::from(flat[0]);
    }
    let stride = flat.len() / n;
    Value::Array(
        (0..n)
            .map(|i| nest_table(&flat[i * stride..(i + 1) * stride], n, arity - 1))
            .collect(),
    )
}

fn flatten_table(
    v: &Value,
    n: usize,
    arity: usize,
    out: &mut Vec<usize>,
) -> std::result::Result<(), String> {
    if arity == 0 {
        let x = v
            .as_u64()
            .ok_or_else(|| format!("expected a non-negative integer, found {v}"))?;
        out.push(x as usize);
        return Ok(());
    }
    let arr = v
        .as_array()
        .ok_or_else(|| format!("expected an array of length {n}, found {v}"))?;
    if arr.len() != n {
        return Err(format!("expected an array of length {n}, found length {}", arr.len()));
    }
    for item in arr {
        flatten_table(item, n, arity - 1, out)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_element_lattice() -> FiniteAlgebra {
        FiniteAlgebra::new(
            "two",
            2,
            vec![
                FiniteAlgebra::op_from_fn("meet", 2, 2, |t| t[0].min(t[1])),
                FiniteAlgebra::op_from_fn("join", 2, 2, |t| t[0].max(t[1])),
                FiniteAlgebra::op_from_fn("zero", 2, 0, |_| 0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn rejects_bad_tables() {
        let bad = Operation {
            name: "f".into(),
            arity: 2,
            table: vec![0, 1, 1],
        };
        assert!(FiniteAlgebra::new("x", 2, vec![bad]).is_err());
        let out_of_range = Operation {
            name: "f".into(),
            arity: 1,
            table: vec![0, 2],
        };
        assert!(FiniteAlgebra::new("x", 2, vec![out_of_range]).is_err());
        assert!(FiniteAlgebra::new("x", 0, vec![]).is_err());
    }

    #[test]
    fn json_tables_are_row_major_and_nullary_scalar() {
        let a = two_element_lattice();
        let j = serde_json::to_value(a.to_json()).unwrap();
        assert_eq!(j["ops"][0]["table"], serde_json::json!([[0, 0], [0, 1]]));
        assert_eq!(j["ops"][2]["table"], serde_json::json!(0));
        let back = FiniteAlgebra::from_json_str(&a.to_json_string()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn malformed_table_names_the_operation() {
        let s = r#"{"name":"x","size":2,"ops":[{"name":"f","arity":1,"table":[0]}]}"#;
        let err = FiniteAlgebra::from_json_str(s).unwrap_err().to_string();
        assert!(err.contains("ops[f].table"), "{err}");
    }

    #[test]
    fn tuple_enumeration_is_lexicographic() {
        let mut seen = vec![];
        for_each_tuple(2, 2, |t| seen.push(t.to_vec()));
        assert_eq!(seen, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        let mut count = 0;
        for_each_tuple(3, 0, |_| count += 1);
        assert_eq!(count, 1);
    }

    #[test]
    fn relabeling_is_an_isomorphism() {
        let a = two_element_lattice();
        let b = a.relabeled(&[1, 0]).unwrap();
        // meet becomes join under order reversal
        assert_eq!(b.apply(0, &[0, 1]), 1);
        assert_eq!(b.apply(2, &[]), 1);
    }
}
