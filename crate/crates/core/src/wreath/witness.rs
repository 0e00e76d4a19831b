//! End-to-end witnesses that a candidate finite `Y ⊆ γ_{c+1}(L)` does not
//! normally generate `[M, N]`.

use serde::{Deserialize, Serialize};

use crate::coset::{enumerate, EnumerationConfig};
use crate::nilpotent::{compute_class, ClassInfo};
use crate::words::Word;
use crate::Presentation;

use super::oracle::{AnyOracle, GroupOracle, Verdict};
use super::psi::{
    find_shift, gamma_membership, lemma2_certify, psi_expand, tail_trivial, z_from, Lemma2Report,
    VarTable, WreathImage, ZSet,
};
use super::WreathError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    M,
    N,
}

/// Which input word a witness factor is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Source {
    pub side: Side,
    pub index: usize,
}

impl Source {
    fn word<'a>(&self, p: &'a Presentation) -> Option<&'a Word> {
        match self.side {
            Side::M => p.a.get(self.index),
            Side::N => p.b.get(self.index),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct WitnessConfig {
    /// Shift candidates to inspect before giving up.
    pub budget: usize,
}

impl Default for WitnessConfig {
    fn default() -> Self {
        WitnessConfig { budget: 10_000 }
    }
}

/// `omega = [u^f, v]` with `u`, `v` taken from opposite sides, so
/// `omega ∈ [M, N]`, together with the data showing `omega ∉ ncl(Y)`.
#[derive(Clone, Debug)]
pub struct Witness<E> {
    pub backend: String,
    pub c: usize,
    pub swapped: bool,
    pub y: Vec<Word>,
    pub u: Word,
    pub u_source: Source,
    pub v: Word,
    pub v_source: Source,
    pub f: Word,
    pub g: E,
    pub z: ZSet<E>,
    pub omega: Word,
    pub checks: Lemma2Report,
    /// Shift candidates inspected.
    pub examined: usize,
}

/// The class `c` computed from `ψ`-tails: for `w ∈ L` the position of
/// `ψ(w)` in the lower central series of `W` is that of `w` in `L`.
pub fn psi_class<O: GroupOracle>(p: &Presentation, o: &O) -> Result<ClassInfo, WreathError> {
    let mut vars = VarTable::new();
    let mut rewrite = |w: &Word| -> Result<Word, WreathError> {
        let img = psi_expand(w, o)?;
        if o.equal(&img.g_part, &o.identity()) != Verdict::Yes {
            return Err(WreathError::NotInKernel(p.alphabet.format(w)));
        }
        vars.tail_word(o, &img)
    };
    Ok(compute_class(&p.a, &p.b, &mut rewrite)?)
}

fn first_nontrivial<O: GroupOracle>(
    words: &[Word],
    side: Side,
    o: &O,
    c: usize,
) -> Result<(Source, WreathImage<O::Elem>), WreathError> {
    for (i, w) in words.iter().enumerate() {
        let img = psi_expand(w, o)?;
        if !tail_trivial(&img, o, c)? {
            return Ok((Source { side, index: i }, img));
        }
    }
    Err(WreathError::TrivialSide(side))
}

pub fn theorem1_witness<O: GroupOracle>(
    p: &Presentation,
    y: &[Word],
    o: &O,
    cfg: &WitnessConfig,
) -> Result<Witness<O::Elem>, WreathError> {
    if !o.is_exact() {
        return Err(WreathError::NotExact);
    }
    if o.is_finite() == Some(true) {
        return Err(WreathError::FiniteGroup);
    }
    let info = psi_class(p, o)?;
    let c = info.c;
    let (m_words, m_side, n_words, n_side) = if info.swapped {
        (&p.b, Side::N, &p.a, Side::M)
    } else {
        (&p.a, Side::M, &p.b, Side::N)
    };
    let (u_source, u_img) = first_nontrivial(m_words, m_side, o, c)?;
    let (v_source, v_img) = first_nontrivial(n_words, n_side, o, c)?;
    let z = z_from(y, o, c)?;
    let shift = find_shift(&u_img, &v_img, &z, o, cfg.budget)?;
    let checks = lemma2_certify(&u_img.shifted(&shift.g, o), &v_img, &z, c, o)?;
    if !checks.passed() {
        return Err(WreathError::Hypothesis(checks.failures().join("; ")));
    }
    let u = m_words[u_source.index].clone();
    let v = n_words[v_source.index].clone();
    let omega = u.conjugate(&shift.word).commutator(&v);
    Ok(Witness {
        backend: o.describe(),
        c,
        swapped: info.swapped,
        y: y.to_vec(),
        u,
        u_source,
        v,
        v_source,
        f: shift.word,
        g: shift.g,
        z,
        omega,
        checks,
        examined: shift.examined,
    })
}

/// Self-contained serialized witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub kind: String,
    pub generators: Vec<String>,
    #[serde(rename = "M")]
    pub m: Vec<String>,
    #[serde(rename = "N")]
    pub n: Vec<String>,
    pub backend: String,
    pub c: usize,
    pub swapped: bool,
    #[serde(rename = "Y")]
    pub y: Vec<String>,
    pub u: String,
    pub u_source: Source,
    pub v: String,
    pub v_source: Source,
    pub f: String,
    /// Rendering of `g` in the backend's own notation.
    pub g: String,
    /// Elements of `Z`, as preimage words.
    #[serde(rename = "Z")]
    pub z: Vec<String>,
    pub omega: String,
    pub checks: Lemma2Report,
}

impl<E> Witness<E> {
    pub fn to_file<O: GroupOracle<Elem = E>>(&self, p: &Presentation, o: &O) -> Result<WitnessFile, WreathError> {
        let al = &p.alphabet;
        let fmt = |ws: &[Word]| ws.iter().map(|w| al.format(w)).collect::<Vec<_>>();
        let z = self
            .z
            .elements
            .iter()
            .map(|e| o.preimage(e).map(|w| al.format(&w)).ok_or(WreathError::NoPreimage))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(WitnessFile {
            kind: "witness".into(),
            generators: al.names().to_vec(),
            m: fmt(&p.a),
            n: fmt(&p.b),
            backend: self.backend.clone(),
            c: self.c,
            swapped: self.swapped,
            y: fmt(&self.y),
            u: al.format(&self.u),
            u_source: self.u_source,
            v: al.format(&self.v),
            v_source: self.v_source,
            f: al.format(&self.f),
            g: o.render(&self.g),
            z,
            omega: al.format(&self.omega),
            checks: self.checks,
        })
    }
}

/// One named re-validation step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RecheckReport {
    pub items: Vec<CheckItem>,
}

impl RecheckReport {
    fn add(&mut self, name: impl Into<String>, ok: bool) -> bool {
        self.items.push(CheckItem { name: name.into(), ok });
        ok
    }

    pub fn passed(&self) -> bool {
        !self.items.is_empty() && self.items.iter().all(|i| i.ok)
    }
}

impl WitnessFile {
    pub fn presentation(&self) -> Result<Presentation, WreathError> {
        let gens: Vec<&str> = self.generators.iter().map(String::as_str).collect();
        let a: Vec<&str> = self.m.iter().map(String::as_str).collect();
        let b: Vec<&str> = self.n.iter().map(String::as_str).collect();
        Presentation::from_strs(&gens, &a, &b).map_err(|e| WreathError::Presentation(e.to_string()))
    }
}

/// Re-validates a serialized witness from its own contents, trusting none
/// of its recorded verdicts.
pub fn recheck(w: &WitnessFile, cosets: &EnumerationConfig) -> Result<RecheckReport, WreathError> {
    let mut r = RecheckReport::default();
    if !r.add("kind is `witness`", w.kind == "witness") {
        return Ok(r);
    }
    let p = w.presentation()?;
    let al = &p.alphabet;
    let parse = |s: &str| al.parse(s).map_err(WreathError::from);
    let u = parse(&w.u)?;
    let v = parse(&w.v)?;
    let f = parse(&w.f)?;
    let omega = parse(&w.omega)?;
    let y = w.y.iter().map(|s| parse(s)).collect::<Result<Vec<_>, _>>()?;

    r.add("u is the named input word", w.u_source.word(&p) == Some(&u));
    r.add("v is the named input word", w.v_source.word(&p) == Some(&v));
    r.add("u and v come from opposite sides", w.u_source.side != w.v_source.side);
    r.add("omega = [u^f, v]", omega == u.conjugate(&f).commutator(&v));

    let o = AnyOracle::from_spec(&w.backend, &p, || Ok(enumerate(&p, cosets)?))?;
    let usable = r.add(
        "backend is exact and infinite",
        o.is_exact() && o.is_finite() == Some(false),
    );
    if !usable || w.c == 0 {
        r.add("c is positive", w.c > 0);
        return Ok(r);
    }
    let c = w.c;
    let zs = w
        .z
        .iter()
        .map(|s| parse(s).map(|x| o.evaluate(&x)))
        .collect::<Result<Vec<_>, _>>()?;
    let z = ZSet { elements: zs };
    r.add(
        "Z contains 1 and is symmetric",
        z.contains(&o, &o.identity()) == Verdict::Yes && z.is_symmetric(&o),
    );
    for (i, yw) in y.iter().enumerate() {
        let img = psi_expand(yw, &o)?;
        let ok = gamma_membership(yw, &o, c)? && z.covers(&o, &img);
        r.add(format!("Y[{i}] lies in the kernel of psi_Z"), ok);
    }
    let g = o.evaluate(&f);
    r.add("g is the image of f", o.render(&g) == w.g);
    let u_img = psi_expand(&u, &o)?;
    let v_img = psi_expand(&v, &o)?;
    let checks = lemma2_certify(&u_img.shifted(&g, &o), &v_img, &z, c, &o)?;
    r.add("(i) cross-supports are Z-distant", checks.distant);
    r.add("(ii) shifted u-tail is nontrivial", checks.u_nontrivial);
    r.add("(iii) v-tail is nontrivial", checks.v_nontrivial);
    r.add("recorded verdicts match", checks == w.checks);
    match psi_class(&p, &o) {
        Ok(info) => r.add("class and orientation match", info.c == c && info.swapped == w.swapped),
        Err(_) => r.add("class and orientation match", false),
    };
    Ok(r)
}
