//! Shared helpers for the integration suites: model loading, polynomial
//! construction over the public API, morphism membership checks, and a
//! deterministic random-model builder for the property sweep.

#![allow(dead_code)]

use sullivan::closure::AcyclicClosure;
use sullivan::dsl;
use sullivan::gens::Gens;
use sullivan::hom::{is_closed_on, Extension, ModuleMorphism};
use sullivan::linalg::{cohomology, echelon, matrix_of, solve_affine};
use sullivan::model::{Differential, SullivanModel};
use sullivan::monomial::Monomial;
use sullivan::param::Coeff;
use sullivan::poly::Poly;
use sullivan::scalar::{frac, rat, Rat};

/// Absolute path of a model file in the workspace corpus.
pub fn corpus_path(name: &str) -> String {
    format!("{}/../../models/{name}", env!("CARGO_MANIFEST_DIR"))
}

/// Loads a model from the workspace corpus by file name.
pub fn corpus_model(name: &str) -> SullivanModel {
    let path = corpus_path(name);
    let text = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("cannot read {path}: {e}"));
    dsl::parse_model(&text).unwrap_or_else(|e| panic!("{name} does not parse: {e}"))
}

/// A single term `num/den · x1^e1 ⋯ xk^ek` over the base generators.
pub fn term(gens: &Gens, num: i64, den: i64, factors: &[(&str, u32)]) -> Poly {
    let mut ids: Vec<_> = factors
        .iter()
        .map(|&(name, exp)| {
            let i = gens
                .v_by_name(name)
                .unwrap_or_else(|| panic!("no generator named {name}"));
            (gens.id_of_v(i), exp)
        })
        .collect();
    ids.sort_by_key(|&(id, _)| id);
    Poly::term(Monomial::from_sorted(ids), Coeff::from_rat(frac(num, den)))
}

/// The monomial `x1^e1 ⋯ xk^ek` over the base generators.
pub fn mono(gens: &Gens, factors: &[(&str, u32)]) -> Monomial {
    let mut ids: Vec<_> = factors
        .iter()
        .map(|&(name, exp)| {
            let i = gens
                .v_by_name(name)
                .unwrap_or_else(|| panic!("no generator named {name}"));
            (gens.id_of_v(i), exp)
        })
        .collect();
    ids.sort_by_key(|&(id, _)| id);
    Monomial::from_sorted(ids)
}

/// The suspension generator `sv` for the named base generator.
pub fn sv(gens: &Gens, name: &str) -> Monomial {
    let i = gens
        .v_by_name(name)
        .unwrap_or_else(|| panic!("no generator named {name}"));
    Monomial::gen(gens.id_of_sv(i))
}

/// The rows every generator construction tracks: the empty word and the
/// suspension generators.
pub fn tracked_rows(gens: &Gens) -> Vec<Monomial> {
    std::iter::once(Monomial::one())
        .chain(gens.sv_ids().map(Monomial::gen))
        .collect()
}

/// Builds a morphism of the given degree from explicit row values.
pub fn morphism_from(degree: i64, values: &[(Monomial, Poly)]) -> ModuleMorphism {
    let mut f = ModuleMorphism::zero(degree);
    for (word, value) in values {
        f.set_value(word.clone(), value.clone());
    }
    f
}

/// Whether `Df = 0` holds identically on the tracked rows, with untracked
/// words read as zero.
pub fn closed_on(model: &SullivanModel, f: &ModuleMorphism) -> bool {
    let closure = AcyclicClosure::build(model);
    is_closed_on(model, &closure, f, &tracked_rows(model.gens()), Extension::Zero) == Some(true)
}

/// Whether some assignment of the free parameters of `f` makes every listed
/// row equal its expected value, jointly across rows.
pub fn family_contains(f: &ModuleMorphism, expected: &[(Monomial, Poly)]) -> bool {
    let mut coords: Vec<Coeff> = Vec::new();
    for (word, want) in expected {
        let got = f.value(word).cloned().unwrap_or_else(Poly::zero);
        coords.extend(got.sub(want).terms().map(|(_, c)| c.clone()));
    }
    let rows = vec![Vec::new(); coords.len()];
    solve_affine(rows, coords, 0).is_ok()
}

/// `Some(λ)` when `p = λ·q` as polynomials for a single scalar λ.
pub fn scalar_multiple_of(p: &Poly, q: &Poly) -> Option<Rat> {
    if q.is_zero() {
        return p.is_zero().then(|| rat(0));
    }
    let (lead, c) = q.terms().next().expect("nonzero");
    let lambda = p.coefficient(lead).as_constant()?.clone() / c.as_constant()?.clone();
    (*p == q.scale(&lambda)).then_some(lambda)
}

/// The λ with `[p] = λ·[reference]` in cohomology, both arguments cocycles
/// of the same degree. `None` when `[p]` is not a multiple of `[reference]`
/// modulo coboundaries.
pub fn class_ratio(model: &SullivanModel, p: &Poly, reference: &Poly) -> Option<Rat> {
    let gens = model.gens();
    if p.is_zero() {
        return Some(rat(0));
    }
    let n = p.degree(gens).expect("homogeneous cocycle");
    let slices = sullivan::basis::Slices::new(gens);
    let basis_n = slices.algebra(n);
    let below = if n == 0 { Vec::new() } else { slices.algebra(n - 1).to_vec() };

    let rat_coords = |q: &Poly| -> Vec<Rat> {
        q.coords_in(&basis_n)
            .expect("stays inside the degree slice")
            .into_iter()
            .map(|c| c.as_constant().expect("parameter-free").clone())
            .collect()
    };
    let mut columns: Vec<Vec<Rat>> = vec![rat_coords(reference)];
    for m in &below {
        columns.push(rat_coords(
            &model.diff().apply(&Poly::monomial(m.clone()), gens),
        ));
    }
    let rows: Vec<Vec<Rat>> = (0..basis_n.len())
        .map(|e| columns.iter().map(|c| c[e].clone()).collect())
        .collect();
    let rhs: Vec<Coeff> = rat_coords(p).into_iter().map(Coeff::from_rat).collect();
    let sol = solve_affine(rows, rhs, columns.len()).ok()?;
    sol.particular[0].as_constant().cloned()
}

/// Deterministic pseudo-random generator values drawn from a pre-sampled
/// entropy pool, wrapping around when exhausted.
pub struct Entropy<'a> {
    pool: &'a [u64],
    cursor: usize,
}

impl<'a> Entropy<'a> {
    pub fn new(pool: &'a [u64]) -> Self {
        assert!(!pool.is_empty());
        Entropy { pool, cursor: 0 }
    }

    fn next(&mut self) -> u64 {
        let x = self.pool[self.cursor % self.pool.len()];
        // Decorrelate wrapped reads so a short pool still varies.
        let salt = (self.cursor / self.pool.len()) as u64;
        self.cursor += 1;
        x.wrapping_mul(0x9e37_79b9_7f4a_7c15).rotate_left(17) ^ salt
    }

    fn range(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

/// All monomials of the given degree over the first `upto` base generators,
/// with word length at least `min_word_length`.
fn monomials_over_prefix(
    gens: &Gens,
    upto: usize,
    degree: u32,
    min_word_length: u32,
) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut factors: Vec<(sullivan::gens::GenId, u32)> = Vec::new();
    fn recurse(
        gens: &Gens,
        upto: usize,
        from: usize,
        remaining: u32,
        words: u32,
        min_word_length: u32,
        factors: &mut Vec<(sullivan::gens::GenId, u32)>,
        out: &mut Vec<Monomial>,
    ) {
        if remaining == 0 {
            if words >= min_word_length {
                out.push(Monomial::from_sorted(factors.clone()));
            }
            return;
        }
        for i in from..upto {
            let id = gens.id_of_v(i);
            let d = gens.degree(id);
            if d > remaining {
                continue;
            }
            let max_exp = if gens.is_odd(id) { 1 } else { remaining / d };
            for exp in 1..=max_exp {
                factors.push((id, exp));
                recurse(
                    gens,
                    upto,
                    i + 1,
                    remaining - d * exp,
                    words + exp,
                    min_word_length,
                    factors,
                    out,
                );
                factors.pop();
            }
        }
    }
    recurse(gens, upto, 0, degree, 0, min_word_length, &mut factors, &mut out);
    out
}

/// Builds a valid model from an entropy pool: at most six generators of
/// degree at most nine, each differential a random cocycle combination of
/// decomposable words in earlier generators. Validity (d² = 0, decomposable
/// images, filtration order) holds by construction and is enforced again by
/// the model constructor.
pub fn random_model(pool: &[u64]) -> SullivanModel {
    let mut e = Entropy::new(pool);
    let n = 1 + e.range(6) as usize;
    let mut degrees: Vec<u32> = (0..n).map(|_| 2 + e.range(8) as u32).collect();
    degrees.sort_unstable();
    // Cap the total degree mass so oracle scans stay quick.
    let mut kept = Vec::new();
    let mut sum = 0;
    for d in degrees {
        if sum + d > 24 && !kept.is_empty() {
            break;
        }
        sum += d;
        kept.push(d);
    }
    let names: Vec<String> = kept.iter().enumerate().map(|(i, _)| format!("g{i}")).collect();
    let gens = Gens::new(
        names
            .iter()
            .map(String::as_str)
            .zip(kept.iter().copied())
            .collect(),
    )
    .expect("degrees are at least two");

    let mut images = vec![Poly::zero(); gens.v_count()];
    for i in 0..gens.v_count() {
        let target = gens.degree(gens.id_of_v(i)) + 1;
        let candidates = monomials_over_prefix(&gens, i, target, 2);
        if candidates.is_empty() {
            continue;
        }
        let codomain = monomials_over_prefix(&gens, i, target + 1, 0);
        let partial = Differential::new(images.clone());
        let rows = matrix_of(&candidates, &codomain, |m| {
            partial.apply(&Poly::monomial(m.clone()), &gens)
        })
        .expect("images stay inside the prefix slice");
        let sol = solve_affine(rows, vec![Coeff::zero(); codomain.len()], candidates.len())
            .expect("homogeneous system");
        if sol.kernel.is_empty() {
            continue;
        }
        let mut coords = vec![rat(0); candidates.len()];
        for dir in &sol.kernel {
            if e.range(2) == 0 {
                continue;
            }
            let c = rat(e.range(5) as i64 - 2);
            for (slot, k) in coords.iter_mut().zip(dir) {
                *slot += &c * k;
            }
        }
        let coeffs: Vec<Coeff> = coords.into_iter().map(Coeff::from_rat).collect();
        images[i] = Poly::from_coords(&candidates, &coeffs);
    }
    SullivanModel::new(gens, Differential::new(images)).expect("valid by construction")
}

/// `d² = 0` on every generator.
pub fn check_differential_squares_to_zero(model: &SullivanModel) {
    let gens = model.gens();
    for i in 0..gens.v_count() {
        let dv = model.diff().apply(&Poly::monomial(Monomial::gen(gens.id_of_v(i))), gens);
        let ddv = model.diff().apply(&dv, gens);
        assert!(ddv.is_zero(), "d²({}) = {}", gens.v_name(i), ddv.display(gens));
    }
}

/// `x·y = (−1)^{|x||y|} y·x` on generator pairs, and odd squares vanish.
pub fn check_graded_commutativity(model: &SullivanModel) {
    let gens = model.gens();
    let ids: Vec<_> = gens.v_ids().chain(gens.sv_ids()).collect();
    for &a in &ids {
        let pa = Poly::monomial(Monomial::gen(a));
        if gens.is_odd(a) {
            assert!(pa.mul(&pa, gens).is_zero(), "odd square must vanish");
        }
        for &b in &ids {
            if a == b {
                continue;
            }
            let pb = Poly::monomial(Monomial::gen(b));
            let forward = pa.mul(&pb, gens);
            let backward = pb.mul(&pa, gens);
            let sign = if gens.is_odd(a) && gens.is_odd(b) { -1 } else { 1 };
            assert_eq!(
                forward,
                backward.scale(&rat(sign)),
                "commutation of {} and {}",
                gens.name(a),
                gens.name(b)
            );
        }
    }
}

/// `D² = 0` on the tracked rows, for a dense degree-zero test morphism.
pub fn check_hom_differential_squares_to_zero(model: &SullivanModel) {
    let gens = model.gens();
    let closure = AcyclicClosure::build(model);
    let slices = sullivan::basis::Slices::new(gens);
    let mut f = ModuleMorphism::zero(0);
    f.set_value(Monomial::one(), Poly::one());
    for i in 0..gens.v_count() {
        let degree = gens.degree(gens.id_of_sv(i));
        let dense = slices
            .algebra(degree)
            .iter()
            .map(|m| (m.clone(), Coeff::one()))
            .collect::<Vec<_>>();
        f.set_value(sv(gens, gens.v_name(i)), Poly::from_terms(dense));
    }
    let rows = tracked_rows(gens);
    let df = sullivan::hom::hom_differential(model, &closure, &f, &rows, Extension::Zero)
        .expect("tracked rows evaluate");
    let ddf = sullivan::hom::hom_differential(model, &closure, &df, &rows, Extension::Zero)
        .expect("tracked rows evaluate");
    assert!(ddf.is_zero(), "D² must vanish on the tracked rows");
}

/// Poincaré duality of the cohomology table plus nondegeneracy of the cup
/// pairing `H^i × H^{N−i} → H^N` in every degree. Elliptic models only.
pub fn check_poincare_and_pairing(model: &SullivanModel) {
    assert!(sullivan::oracle::poincare_duality_holds(model), "dims must mirror");
    let n = model.formal_dimension();
    assert!(n >= 0);
    let n = n as u32;
    let fc = sullivan::oracle::fundamental_class(model).expect("elliptic top class");
    let table: Vec<_> = (0..=n).map(|i| cohomology(model, i)).collect();
    for i in 0..=n {
        let low = &table[i as usize];
        let high = &table[(n - i) as usize];
        assert_eq!(low.dim, high.dim, "duality of dimensions in degree {i}");
        if low.dim == 0 {
            continue;
        }
        let pairing: Vec<Vec<Rat>> = low
            .reps
            .iter()
            .map(|a| {
                high.reps
                    .iter()
                    .map(|b| {
                        class_ratio(model, &a.mul(b, model.gens()), &fc)
                            .expect("products of cocycles land in the top class line")
                    })
                    .collect()
            })
            .collect();
        assert_eq!(
            echelon(pairing, high.dim).len(),
            low.dim,
            "cup pairing must have full rank in degree {i}"
        );
    }
}

/// Pipeline/oracle agreement: on elliptic models the pipeline invariant
/// equals the brute-force search and is stable under rescaling the
/// representative and shifting it by a coboundary; on non-elliptic models
/// the pipeline refuses. Returns whether the model was elliptic.
pub fn check_invariant_agreement(model: &SullivanModel) -> bool {
    use sullivan::invariants::{compute_invariants, PipelineError};
    use sullivan::linalg::class_word_length;

    if !sullivan::oracle::is_elliptic(model) {
        assert!(
            matches!(compute_invariants(model), Err(PipelineError::NotElliptic)),
            "the pipeline must refuse a non-elliptic model"
        );
        return false;
    }
    let report = compute_invariants(model).expect("elliptic models have invariants");
    let brute = sullivan::oracle::e0_bruteforce(model).expect("elliptic");
    assert_eq!(report.e0, brute, "pipeline and oracle word-length invariants");
    assert_eq!(report.e0, report.cat0);
    assert_eq!(report.e0, report.r0);

    let gens = model.gens();
    let rep = &report.fundamental_class_rep;
    assert_eq!(class_word_length(model, rep), report.e0);
    let scaled = rep.scale(&frac(-3, 7));
    assert_eq!(class_word_length(model, &scaled), report.e0, "scalar scaling");
    let n = model.formal_dimension() as u32;
    if n >= 1 {
        let slices = sullivan::basis::Slices::new(gens);
        let below = slices.algebra(n - 1);
        if !below.is_empty() {
            let dense: Vec<_> = below.iter().map(|m| (m.clone(), Coeff::one())).collect();
            let shift = model.diff().apply(&Poly::from_terms(dense), gens);
            let shifted = rep.add(&shift);
            assert_eq!(class_word_length(model, &shifted), report.e0, "coboundary shift");
        }
    }
    true
}

/// Round-trip of the text format: printing and re-parsing is the identity
/// on the printed form.
pub fn check_print_parse_round_trip(model: &SullivanModel) {
    let printed = dsl::print_model(model);
    let reparsed = dsl::parse_model(&printed)
        .unwrap_or_else(|e| panic!("printed model must re-parse: {e}\n{printed}"));
    assert_eq!(dsl::print_model(&reparsed), printed, "printing must be canonical");
}

/// The ellipticity verdict read directly off the cohomology table: positive
/// formal dimension and no cohomology in the window above it. Pure models
/// only; agrees with the quotient-window classifier exactly there.
pub fn table_elliptic(model: &SullivanModel) -> bool {
    let n = model.formal_dimension();
    if n < 2 {
        return false;
    }
    let max_degree = (0..model.gens().v_count())
        .map(|i| model.gens().degree(model.gens().id_of_v(i)))
        .max()
        .unwrap_or(0);
    let dims = sullivan::oracle::cohomology_dims(model, n as u32 + max_degree + 1);
    dims[(n as usize + 1)..].iter().all(|&d| d == 0)
}
