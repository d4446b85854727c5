use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{closure, GroupUniverse};

pub const DEFAULT_COSET_CAP: usize = 10_000;

pub type Membership<E> = Arc<dyn Fn(&E) -> bool + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `ΓgΓ = ⊔ h_j Σ`
    Left,
    /// `ΓgΓ = ⊔ Σ h_j`
    Right,
}

#[derive(Clone, Debug)]
pub struct CosetDecomposition<E> {
    pub g: E,
    pub reps: Vec<E>,
    pub side: Side,
}

impl<E> CosetDecomposition<E> {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

/// A group `Γ` inside a universe `G`, with a normal subgroup `Σ` of finite
/// index. Both subgroups are given by membership predicates.
#[derive(Clone)]
pub struct HeckePair<U: GroupUniverse> {
    pub universe: U,
    gamma: Membership<U::Element>,
    gamma_generators: Vec<U::Element>,
    sigma: Membership<U::Element>,
    sigma_label: String,
    sigma_transversal: Vec<U::Element>,
    sigma_generators: Vec<U::Element>,
    finite_elements: Option<Vec<U::Element>>,
    cap: usize,
}

impl<U: GroupUniverse> fmt::Debug for HeckePair<U> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HeckePair")
            .field("gamma_generators", &self.gamma_generators)
            .field("sigma_label", &self.sigma_label)
            .field("sigma_index", &self.sigma_transversal.len())
            .finish()
    }
}

/// Breadth-first closure of the cosets meeting `seeds`, where `step` moves a
/// representative and `same` decides coset equality.
fn coset_bfs<E: Clone>(
    seeds: Vec<E>,
    moves: &[E],
    step: impl Fn(&E, &E) -> E,
    same: impl Fn(&E, &E) -> bool,
    cap: usize,
) -> Result<Vec<E>> {
    let mut reps: Vec<E> = Vec::new();
    let mut queue = VecDeque::new();
    let visit = |x: E, reps: &mut Vec<E>, queue: &mut VecDeque<E>| -> Result<()> {
        if !reps.iter().any(|h| same(h, &x)) {
            if reps.len() >= cap {
                return Err(Error::CosetCap { cap });
            }
            reps.push(x.clone());
            queue.push_back(x);
        }
        Ok(())
    };
    for s in seeds {
        visit(s, &mut reps, &mut queue)?;
    }
    while let Some(r) = queue.pop_front() {
        for m in moves {
            visit(step(m, &r), &mut reps, &mut queue)?;
        }
    }
    Ok(reps)
}

impl<U: GroupUniverse> HeckePair<U> {
    /// Builds the pair, computing a transversal of `Σ` in `Γ` by coset search
    /// and generators of `Σ` by Schreier's lemma.
    pub fn new(
        universe: U,
        gamma: Membership<U::Element>,
        gamma_generators: Vec<U::Element>,
        sigma: Membership<U::Element>,
        sigma_label: impl Into<String>,
    ) -> Result<Self> {
        for g in &gamma_generators {
            if !gamma(g) {
                return Err(Error::input(format!("generator {g:?} is not in Γ")));
            }
        }
        let mut pair = HeckePair {
            universe,
            gamma,
            gamma_generators,
            sigma,
            sigma_label: sigma_label.into(),
            sigma_transversal: Vec::new(),
            sigma_generators: Vec::new(),
            finite_elements: None,
            cap: DEFAULT_COSET_CAP,
        };
        for g in &pair.gamma_generators {
            for x in pair.gamma_generators.iter().chain(std::iter::once(&pair.universe.identity())) {
                if (pair.sigma)(x) && !(pair.sigma)(&pair.universe.conj(g, x)) {
                    return Err(Error::input("Σ is not normal in Γ"));
                }
            }
        }
        let id = pair.universe.identity();
        pair.sigma_transversal = pair.bfs_left(vec![id], &pair.sigma)?;
        pair.sigma_generators = pair.schreier_generators();
        for s in &pair.sigma_generators {
            for g in &pair.gamma_generators {
                if !(pair.sigma)(&pair.universe.conj(g, s)) {
                    return Err(Error::input("Σ is not normal in Γ"));
                }
            }
        }
        Ok(pair)
    }

    /// Pair with `Σ = Γ`.
    pub fn with_sigma_gamma(universe: U, gamma: Membership<U::Element>, gamma_generators: Vec<U::Element>) -> Result<Self> {
        let sigma = gamma.clone();
        Self::new(universe, gamma, gamma_generators, sigma, "Γ")
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    /// Marks the universe as the finite group with these elements.
    pub fn with_finite_universe(mut self, elements: Vec<U::Element>) -> Self {
        self.finite_elements = Some(elements);
        self
    }

    pub fn in_gamma(&self, x: &U::Element) -> bool {
        (self.gamma)(x)
    }

    pub fn in_sigma(&self, x: &U::Element) -> bool {
        (self.sigma)(x)
    }

    pub fn gamma_generators(&self) -> &[U::Element] {
        &self.gamma_generators
    }

    pub fn sigma_generators(&self) -> &[U::Element] {
        &self.sigma_generators
    }

    pub fn sigma_transversal(&self) -> &[U::Element] {
        &self.sigma_transversal
    }

    pub fn sigma_index(&self) -> usize {
        self.sigma_transversal.len()
    }

    pub fn sigma_label(&self) -> &str {
        &self.sigma_label
    }

    pub fn finite_elements(&self) -> Option<&[U::Element]> {
        self.finite_elements.as_deref()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// The same `Γ` with a different normal subgroup.
    pub fn with_sigma(&self, sigma: Membership<U::Element>, label: impl Into<String>) -> Result<Self>
    where
        U: Clone,
    {
        let mut p = HeckePair::new(self.universe.clone(), self.gamma.clone(), self.gamma_generators.clone(), sigma, label)?;
        p.finite_elements = self.finite_elements.clone();
        p.cap = self.cap;
        Ok(p)
    }

    fn moves(&self) -> Vec<U::Element> {
        let mut m = self.gamma_generators.clone();
        m.extend(self.gamma_generators.iter().map(|g| self.universe.inv(g)));
        m
    }

    fn bfs_left(&self, seeds: Vec<U::Element>, sub: &Membership<U::Element>) -> Result<Vec<U::Element>> {
        let u = &self.universe;
        coset_bfs(seeds, &self.moves(), |m, r| u.mul(m, r), |h, x| sub(&u.mul(&u.inv(h), x)), self.cap)
    }

    fn bfs_right(&self, seeds: Vec<U::Element>, sub: &Membership<U::Element>) -> Result<Vec<U::Element>> {
        let u = &self.universe;
        coset_bfs(seeds, &self.moves(), |m, r| u.mul(r, m), |h, x| sub(&u.mul(x, &u.inv(h))), self.cap)
    }

    fn schreier_generators(&self) -> Vec<U::Element> {
        let u = &self.universe;
        let mut out: Vec<U::Element> = Vec::new();
        let id = u.identity();
        for t in &self.sigma_transversal {
            for s in &self.gamma_generators {
                let st = u.mul(s, t);
                let rep = self
                    .sigma_transversal
                    .iter()
                    .find(|r| (self.sigma)(&u.mul(&u.inv(r), &st)))
                    .expect("transversal covers Γ");
                let x = u.mul(&u.inv(rep), &st);
                if x != id && !out.contains(&x) {
                    out.push(x);
                }
            }
        }
        out
    }

    /// Coset decomposition of `ΓgΓ` into `Σ`-cosets on the given side.
    pub fn enumerate_cosets(&self, g: &U::Element, side: Side) -> Result<CosetDecomposition<U::Element>> {
        let u = &self.universe;
        let reps = match side {
            Side::Left => {
                let seeds = self.sigma_transversal.iter().map(|t| u.mul(g, t)).collect();
                self.bfs_left(seeds, &self.sigma)?
            }
            Side::Right => {
                let seeds = self.sigma_transversal.iter().map(|t| u.mul(t, g)).collect();
                self.bfs_right(seeds, &self.sigma)?
            }
        };
        Ok(CosetDecomposition { g: g.clone(), reps, side })
    }

    /// Decomposition of `ΓgΓ` into `Γ`-cosets.
    pub fn enumerate_gamma_cosets(&self, g: &U::Element, side: Side) -> Result<CosetDecomposition<U::Element>> {
        let reps = match side {
            Side::Left => self.bfs_left(vec![g.clone()], &self.gamma)?,
            Side::Right => self.bfs_right(vec![g.clone()], &self.gamma)?,
        };
        Ok(CosetDecomposition { g: g.clone(), reps, side })
    }

    /// `|ΣgΣ/Σ|`, by closing `gΣ` under left multiplication by `Σ`.
    pub fn sigma_double_coset_size(&self, g: &U::Element) -> Result<usize> {
        let u = &self.universe;
        let mut moves = self.sigma_generators.clone();
        moves.extend(self.sigma_generators.iter().map(|s| u.inv(s)));
        let sigma = &self.sigma;
        Ok(coset_bfs(vec![g.clone()], &moves, |m, r| u.mul(m, r), |h, x| sigma(&u.mul(&u.inv(h), x)), self.cap)?.len())
    }

    fn acts_trivially(&self, reps: &[U::Element], sub: &Membership<U::Element>, x: &U::Element) -> bool {
        let u = &self.universe;
        reps.iter().all(|h| sub(&u.mul(&u.inv(h), &u.mul(x, h))))
    }

    /// `γ ∈ Γ(g)`: `γ` fixes every coset of `ΓgΓ/Γ`.
    pub fn gamma_g_contains(&self, g: &U::Element, gamma: &U::Element) -> Result<bool> {
        if !self.in_gamma(gamma) {
            return Err(Error::input(format!("{gamma:?} is not in Γ")));
        }
        let dec = self.enumerate_gamma_cosets(g, Side::Left)?;
        Ok(self.acts_trivially(&dec.reps, &self.gamma, gamma))
    }

    /// `σ ∈ Σ(g)`: `σ` fixes every coset of `ΓgΓ/Σ`.
    pub fn sigma_g_contains(&self, g: &U::Element, sigma: &U::Element) -> Result<bool> {
        if !self.in_sigma(sigma) {
            return Err(Error::input(format!("{sigma:?} is not in Σ")));
        }
        let dec = self.enumerate_cosets(g, Side::Left)?;
        Ok(self.acts_trivially(&dec.reps, &self.sigma, sigma))
    }

    /// Membership predicate for `Σ(g)`, computed once from the coset list.
    pub fn sigma_g_membership(&self, g: &U::Element) -> Result<Membership<U::Element>>
    where
        U: Clone + 'static,
    {
        let reps = self.enumerate_cosets(g, Side::Left)?.reps;
        let u = self.universe.clone();
        let sigma = self.sigma.clone();
        Ok(Arc::new(move |x: &U::Element| {
            sigma(x) && reps.iter().all(|h| sigma(&u.mul(&u.inv(h), &u.mul(x, h))))
        }))
    }

    /// Elements of `Σ`, for finite universes.
    pub fn sigma_elements(&self) -> Result<Vec<U::Element>> {
        if self.finite_elements.is_none() {
            return Err(Error::Unsupported("Σ is only enumerated in finite universes".into()));
        }
        closure(&self.universe, &self.sigma_generators, self.cap)
    }

    /// All elements of `Σ(g)`, for finite universes; used as generators of
    /// the modulus subgroup.
    pub fn sigma_g_elements(&self, g: &U::Element) -> Result<Vec<U::Element>> {
        let reps = self.enumerate_cosets(g, Side::Left)?.reps;
        Ok(self
            .sigma_elements()?
            .into_iter()
            .filter(|x| self.acts_trivially(&reps, &self.sigma, x))
            .collect())
    }

    /// Elements of `Γ(g)`, for finite universes.
    pub fn gamma_g_elements(&self, g: &U::Element) -> Result<Vec<U::Element>> {
        if self.finite_elements.is_none() {
            return Err(Error::Unsupported("Γ(g) is only enumerated in finite universes".into()));
        }
        let reps = self.enumerate_gamma_cosets(g, Side::Left)?.reps;
        Ok(closure(&self.universe, &self.gamma_generators, self.cap)?
            .into_iter()
            .filter(|x| self.acts_trivially(&reps, &self.gamma, x))
            .collect())
    }
}

/// In a finite universe, checks that `Γ(g)(h) ⊆ Γ(g) ∩ Γ(h)`, where `Γ(g)(h)`
/// is the same construction applied to the pair `(G, Γ(g))`.
pub fn congruence_lattice_check<U>(pair: &HeckePair<U>, g: &U::Element, h: &U::Element) -> Result<bool>
where
    U: GroupUniverse + Clone + 'static,
{
    let gamma_g = pair.gamma_g_elements(g)?;
    let gamma_h = pair.gamma_g_elements(h)?;
    let members = gamma_g.clone();
    let inner = HeckePair::with_sigma_gamma(
        pair.universe.clone(),
        Arc::new(move |x: &U::Element| members.contains(x)),
        gamma_g.clone(),
    )?
    .with_finite_universe(pair.finite_elements().unwrap_or_default().to_vec());
    let nested = inner.gamma_g_elements(h)?;
    Ok(nested.iter().all(|x| gamma_g.contains(x) && gamma_h.contains(x)))
}
