//! Seeded generator of small random systems, for oracle comparisons.

use mmsim_core::{Configuration, Layout, Model, Multiset, Rule, RuleForm, Symbol};

use crate::rng::SplitMix64;

/// Size limits for [`random_system`].
#[derive(Clone, Copy, Debug)]
pub struct SampleLimits {
    pub max_membranes: usize,
    pub max_rules: usize,
    /// Size of the object alphabet.
    pub symbols: usize,
    pub max_count: u64,
}

impl Default for SampleLimits {
    fn default() -> Self {
        SampleLimits {
            max_membranes: 3,
            max_rules: 4,
            symbols: 6,
            max_count: 3,
        }
    }
}

const ALPHABET: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];
const LABELS: [&str; 3] = ["S", "A", "B"];

fn sym(s: &str) -> Symbol {
    Symbol::new(s).expect("static symbols are valid")
}

fn pick<'a>(rng: &mut SplitMix64, from: &[&'a str]) -> &'a str {
    from[rng.below(from.len() as u64) as usize]
}

fn multiset(rng: &mut SplitMix64, alphabet: &[&str], items: u64, max_count: u64) -> Multiset {
    let mut m = Multiset::new();
    for _ in 0..items {
        let count = 1 + rng.below(max_count);
        let s = sym(pick(rng, alphabet));
        if m.count(&s) + count <= max_count {
            m.insert(s, count).expect("small counts");
        }
    }
    m
}

/// One or two symbols of `from`, each with a count it can afford.
fn sub_multiset(rng: &mut SplitMix64, from: &Multiset) -> Multiset {
    let entries: Vec<(&Symbol, u64)> = from.iter().collect();
    let mut m = Multiset::new();
    if entries.is_empty() {
        return m;
    }
    for _ in 0..1 + rng.below(2) {
        let (s, n) = entries[rng.below(entries.len() as u64) as usize];
        if m.count(s) == 0 {
            m.insert(s.clone(), 1 + rng.below(n.min(2)))
                .expect("small counts");
        }
    }
    m
}

/// A random model within `limits`, fully determined by `seed`.
///
/// Labels repeat on purpose (`S`, `A`, `B`) so endo rules see several
/// candidate hosts, and all five rule forms are drawn uniformly. Most
/// rules are fitted to an existing membrane and its contents.
pub fn random_system(seed: u64, limits: SampleLimits) -> Model {
    let mut rng = SplitMix64::new(seed);
    let alphabet = &ALPHABET[..limits.symbols.clamp(1, ALPHABET.len())];

    let membranes = 1 + rng.below(limits.max_membranes.max(1) as u64) as usize;
    let mut nodes: Vec<(Layout, Option<usize>)> = Vec::new();
    for i in 0..membranes {
        let label = if i == 0 {
            "S"
        } else {
            pick(&mut rng, &LABELS[1..])
        };
        let items = 1 + rng.below(4);
        let layout = Layout::new(sym(label)).with_contents(multiset(
            &mut rng,
            alphabet,
            items,
            limits.max_count,
        ));
        let parent = if i == 0 {
            None
        } else {
            Some(rng.below(i as u64) as usize)
        };
        nodes.push((layout, parent));
    }
    // Attach children bottom-up so each layout is complete when moved.
    for i in (1..nodes.len()).rev() {
        let (child, parent) = nodes.pop().expect("index in range");
        let p = parent.expect("non-root");
        nodes[p].0.children.insert(0, child);
        debug_assert_eq!(nodes.len(), i);
    }
    let config = Configuration::from_layout(&nodes.remove(0).0);
    let walk = config.walk();

    let forms = [
        RuleForm::Rewrite,
        RuleForm::Endo,
        RuleForm::Exo,
        RuleForm::SendIn,
        RuleForm::SendOut,
    ];
    let count = 1 + rng.below(limits.max_rules.max(1) as u64) as usize;
    let mut rules = Vec::new();
    for r in 0..count {
        let form = forms[rng.below(forms.len() as u64) as usize];
        let mut subject = sym(pick(&mut rng, &LABELS));
        let mut host = form.needs_host().then(|| sym(pick(&mut rng, &LABELS)));
        let items = 1 + rng.below(2);
        let mut consumed = multiset(&mut rng, alphabet, items, 2);
        // Most rules are fitted to a membrane that exists, so that
        // they can actually fire.
        let inner: Vec<_> = walk.iter().filter(|(_, p)| p.is_some()).collect();
        let pool: Vec<_> = if form == RuleForm::Rewrite || inner.is_empty() {
            walk.iter().collect()
        } else {
            inner
        };
        if rng.below(4) != 0 {
            let (m, parent) = *pool[rng.below(pool.len() as u64) as usize];
            let parent = parent.and_then(|p| config.membrane(p));
            subject = m.label.clone();
            let source = if form == RuleForm::SendIn {
                parent.unwrap_or(m)
            } else {
                m
            };
            let fitted = sub_multiset(&mut rng, &source.contents);
            if !fitted.is_empty() {
                consumed = fitted;
            }
            match (form, parent) {
                (RuleForm::Endo, Some(p)) => {
                    let siblings: Vec<&str> = p
                        .children
                        .iter()
                        .filter(|c| c.id != m.id)
                        .map(|c| c.label.as_str())
                        .collect();
                    if !siblings.is_empty() {
                        host = Some(sym(pick(&mut rng, &siblings)));
                    }
                }
                (RuleForm::Exo, Some(p)) => host = Some(p.label.clone()),
                _ => {}
            }
        }
        if consumed.is_empty() {
            consumed = Multiset::singleton(sym(alphabet[0]), 1);
        }
        let produced_items = rng.below(3);
        let produced = multiset(&mut rng, alphabet, produced_items, 2);
        let promoter = (rng.below(4) == 0).then(|| multiset(&mut rng, alphabet, 1, 1));
        rules.push(
            Rule::new(
                format!("r{r}"),
                form,
                subject,
                host,
                consumed,
                produced,
                promoter,
            )
            .expect("generated rules are well-formed"),
        );
    }
    Model::new(config, rules).expect("rule ids are distinct")
}
