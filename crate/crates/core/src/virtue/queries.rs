use std::collections::BTreeSet;

use serde::Serialize;

use crate::kernel::{Formula, Term};
use crate::reasoner::{identity_of, KnowledgeBase};
use crate::syntax::print_term;

/// Agents that hold `s` as an exemplar.
pub fn admirers_of(kb: &KnowledgeBase, s: &Term) -> BTreeSet<Term> {
    kb.in_context(&[])
        .filter_map(|f| {
            let a = f.atom_args("exemplar")?;
            (&a[0] == s && a[1].is_ground()).then(|| a[1].clone())
        })
        .collect()
}

/// `s` is an exemplar for at least `n` distinct agents.
pub fn virtuous(kb: &KnowledgeBase, s: &Term, n: usize) -> bool {
    admirers_of(kb, s).len() >= n
}

/// Outcome of asking whether a trait is a virtue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirtueVerdict {
    /// Agents holding a trait alpha-equivalent to the query.
    pub holders: BTreeSet<Term>,
    /// Holders that are exemplars for somebody.
    pub virtuous_holders: BTreeSet<Term>,
    pub n: usize,
}

impl VirtueVerdict {
    /// The authoritative answer: enough virtuous holders.
    pub fn is_virtue(&self) -> bool {
        self.virtuous_holders.len() >= self.n
    }

    /// The answer when any holder counts.
    pub fn held_widely(&self) -> bool {
        self.holders.len() >= self.n
    }
}

impl Serialize for VirtueVerdict {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let names = |ts: &BTreeSet<Term>| ts.iter().map(print_term).collect::<Vec<_>>();
        let mut st = s.serialize_struct("VirtueVerdict", 5)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("holders", &names(&self.holders))?;
        st.serialize_field("virtuous_holders", &names(&self.virtuous_holders))?;
        st.serialize_field("held_widely", &self.held_widely())?;
        st.serialize_field("is_virtue", &self.is_virtue())?;
        st.end()
    }
}

/// Agents carrying a trait alpha-equivalent to `trait_formula`, a
/// `(trait body agent)` formula whose agent is abstracted before comparison.
pub fn trait_holders(kb: &KnowledgeBase, trait_formula: &Formula) -> BTreeSet<Term> {
    let Formula::Trait { agent, .. } = trait_formula else {
        return BTreeSet::new();
    };
    let want = identity_of(trait_formula, agent);
    kb.in_context(&[])
        .filter_map(|f| match f {
            Formula::Trait { agent: a, .. } if a.is_ground() && identity_of(f, a) == want => Some(a.clone()),
            _ => None,
        })
        .collect()
}

/// Whether the trait is held by at least `n` agents who are themselves
/// exemplars for somebody; the unrestricted count is reported alongside.
pub fn is_virtue(kb: &KnowledgeBase, trait_formula: &Formula, n: usize) -> VirtueVerdict {
    let holders = trait_holders(kb, trait_formula);
    let virtuous_holders = holders.iter().filter(|a| virtuous(kb, a, 1)).cloned().collect();
    VirtueVerdict {
        holders,
        virtuous_holders,
        n,
    }
}
