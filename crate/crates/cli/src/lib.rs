//! Command implementations behind the `mncomm` binary. Every command
//! returns a [`Report`] (text, JSON, exit status) or a stage-tagged
//! [`Failure`].

use std::fmt;

use mncomm::coset::{decide_index, CosetError, CosetTable, EnumerationConfig, IndexVerdict};
use mncomm::lemma1::{verify_certificate, Certificate, CertificateContext, Lemma1Error, RelatorSet};
use mncomm::stallings::SubgroupGraph;
use mncomm::wreath::{
    psi_class, recheck as recheck_witness, theorem1_witness, AnyOracle, CheckItem, GroupOracle, WitnessConfig,
    WitnessFile, WreathError,
};
use mncomm::{Alphabet, Presentation, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    Undecided = 2,
    Verification = 3,
    Limit = 4,
    Input = 5,
    NotFinitelyPresented = 6,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug)]
pub struct Failure {
    pub exit: Exit,
    pub stage: &'static str,
    pub message: String,
}

impl Failure {
    fn new(exit: Exit, stage: &'static str, message: impl Into<String>) -> Self {
        Failure {
            exit,
            stage,
            message: message.into(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": "error",
            "stage": self.stage,
            "exit": self.exit.code(),
            "message": self.message,
        })
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}]: {}", self.stage, self.message)
    }
}

pub struct Report {
    pub exit: Exit,
    pub text: String,
    pub json: Value,
    /// File artifact for `--out` (certificates and witnesses).
    pub artifact: Option<Value>,
    pub dot: Option<String>,
}

impl Report {
    fn new(exit: Exit, text: String, json: Value) -> Self {
        Report {
            exit,
            text,
            json,
            artifact: None,
            dot: None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_cosets: usize,
    pub max_rounds: usize,
    pub budget: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_cosets: 100_000,
            max_rounds: 16,
            budget: WitnessConfig::default().budget,
        }
    }
}

impl Limits {
    fn cosets(&self) -> EnumerationConfig {
        EnumerationConfig::with_max(self.max_cosets)
    }
}

pub fn parse_presentation(text: &str) -> Result<Presentation, Failure> {
    Presentation::parse(text).map_err(|e| Failure::new(Exit::Input, "parse", e.to_string()))
}

pub fn load_presentation(path: &std::path::Path) -> Result<Presentation, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(Exit::Input, "io", format!("{}: {e}", path.display())))?;
    parse_presentation(&text)
}

fn coset_failure(stage: &'static str, e: CosetError) -> Failure {
    let exit = match e {
        CosetError::Overflowed { .. } => Exit::Limit,
        _ => Exit::Input,
    };
    Failure::new(exit, stage, e.to_string())
}

fn lemma1_failure(stage: &'static str, e: Lemma1Error) -> Failure {
    let exit = match e {
        Lemma1Error::RoundsExceeded { .. } => Exit::Limit,
        _ => Exit::Input,
    };
    Failure::new(exit, stage, e.to_string())
}

fn wreath_failure(stage: &'static str, e: WreathError) -> Failure {
    let exit = match &e {
        WreathError::BudgetExhausted { .. } | WreathError::Coset(CosetError::Overflowed { .. }) => Exit::Limit,
        WreathError::Hypothesis(_) => Exit::Verification,
        _ => Exit::Input,
    };
    Failure::new(exit, stage, e.to_string())
}

fn words(al: &Alphabet, ws: &[Word]) -> Vec<String> {
    ws.iter().map(|w| al.format(w)).collect()
}

fn wrap(s: &str) -> String {
    if s.contains(' ') {
        format!("({s})")
    } else {
        s.to_string()
    }
}

fn paren(al: &Alphabet, w: &Word) -> String {
    wrap(&al.format(w))
}

pub fn index(p: &Presentation, limits: &Limits) -> Result<Report, Failure> {
    let verdict = decide_index(p, &limits.cosets()).map_err(|e| coset_failure("index", e))?;
    let al = &p.alphabet;
    Ok(match verdict {
        IndexVerdict::Finite(t) => {
            let reps = words(al, &t.transversal().reps);
            let mut text = format!("[F : MN] = {}\ntransversal:\n", t.index());
            for (i, r) in reps.iter().enumerate() {
                text += &format!("  L{}  {r}\n", i + 1);
            }
            let j = json!({"kind": "index", "verdict": "finite", "index": t.index(), "transversal": reps});
            Report::new(Exit::Success, text, j)
        }
        IndexVerdict::Infinite { free_rank } => Report::new(
            Exit::Success,
            format!("infinite (abelianization has free rank {free_rank})\n"),
            json!({"kind": "index", "verdict": "infinite", "free_rank": free_rank}),
        ),
        IndexVerdict::Undecided { max_cosets } => Report::new(
            Exit::Undecided,
            format!("undecided (abelianization is finite; enumeration exceeded {max_cosets} cosets)\n"),
            json!({"kind": "index", "verdict": "undecided", "max_cosets": max_cosets}),
        ),
    })
}

/// The coset table of `L`, or the appropriate failure when `[F : L]` is
/// not known to be finite.
fn finite_table(p: &Presentation, limits: &Limits, stage: &'static str, infinite: Exit) -> Result<CosetTable, Failure> {
    match decide_index(p, &limits.cosets()).map_err(|e| coset_failure(stage, e))? {
        IndexVerdict::Finite(t) => Ok(t),
        IndexVerdict::Infinite { free_rank } => Err(Failure::new(
            infinite,
            stage,
            format!(
                "[F : MN] is infinite (abelianization has free rank {free_rank}); \
                 [M,N] is not the normal closure of a finite set (see `witness`)"
            ),
        )),
        IndexVerdict::Undecided { max_cosets } => Err(Failure::new(
            Exit::Undecided,
            stage,
            format!("index undecided within {max_cosets} cosets (raise --max-cosets)"),
        )),
    }
}

fn context(p: &Presentation, limits: &Limits, stage: &'static str) -> Result<CertificateContext, Failure> {
    let t = finite_table(p, limits, stage, Exit::NotFinitelyPresented)?;
    CertificateContext::build(&p.a, &p.b, t, limits.max_rounds).map_err(|e| lemma1_failure("saturate", e))
}

/// Human label `[m^h, n]` for each distinct relator, from its first triple.
fn relator_labels(al: &Alphabet, ctx: &CertificateContext) -> Vec<(String, [usize; 3])> {
    let lg = &ctx.lifted;
    let mut out: Vec<Option<(String, [usize; 3])>> = vec![None; ctx.relators.len()];
    for (&(m, k, n), &pos) in &ctx.relators.index {
        if out[pos].is_some() {
            continue;
        }
        let h = &ctx.transversal.reps[k];
        let base = paren(al, &lg.m_gens[m]);
        let mh = if h.is_identity() {
            base
        } else {
            format!("{base}^{}", paren(al, h))
        };
        out[pos] = Some((format!("[{mh}, {}]", paren(al, &lg.n_gens[n])), [m, k, n]));
    }
    out.into_iter().map(|x| x.expect("every relator has a triple")).collect()
}

pub fn present(p: &Presentation, limits: &Limits) -> Result<Report, Failure> {
    let ctx = context(p, limits, "present")?;
    let al = &p.alphabet;
    let lg = &ctx.lifted;
    let reps = words(al, &ctx.transversal.reps);
    let labels = relator_labels(al, &ctx);
    let r = &ctx.relators;

    let mut text = format!("[F : MN] = {}  transversal: {}\n", ctx.table.index(), reps.join(", "));
    text += &format!("lifted generators ({} saturation rounds):\n", lg.rounds);
    for (i, w) in lg.m_gens.iter().enumerate() {
        text += &format!("  m{i} = {}\n", al.format(w));
    }
    for (i, w) in lg.n_gens.iter().enumerate() {
        text += &format!("  n{i} = {}\n", al.format(w));
    }
    text += &format!("relators: {} distinct of {} formal\n", r.len(), r.formal_count);
    for (i, (label, _)) in labels.iter().enumerate() {
        text += &format!("  r{i} = {label} = {}\n", al.format(&r.relators[i]));
    }
    let statement = format!(
        "F/[M,N] ≅ ⟨{} | {}⟩",
        al.names().join(", "),
        labels.iter().map(|(l, _)| l.as_str()).collect::<Vec<_>>().join(", ")
    );
    text += &statement;
    text.push('\n');

    let rel_json: Vec<Value> = labels
        .iter()
        .zip(&r.relators)
        .map(|((label, t), w)| json!({"label": label, "word": al.format(w), "triple": t}))
        .collect();
    let j = json!({
        "kind": "presentation",
        "generators": al.names(),
        "index": ctx.table.index(),
        "transversal": reps,
        "rounds": lg.rounds,
        "m_gens": words(al, &lg.m_gens),
        "n_gens": words(al, &lg.n_gens),
        "formal_count": r.formal_count,
        "relator_count": r.len(),
        "relators": rel_json,
        "statement": statement,
    });
    let mut rep = Report::new(Exit::Success, text, j);
    rep.dot = Some(SubgroupGraph::build(p.rank(), &lg.all()).to_dot(al));
    Ok(rep)
}

/// Self-contained certificate artifact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub kind: String,
    pub generators: Vec<String>,
    #[serde(rename = "M")]
    pub m: Vec<String>,
    #[serde(rename = "N")]
    pub n: Vec<String>,
    pub max_rounds: usize,
    pub m_index: usize,
    pub n_index: usize,
    pub m_word: String,
    pub n_word: String,
    pub f: String,
    pub relators: Vec<String>,
    pub certificate: Value,
}

pub fn certify(p: &Presentation, limits: &Limits, m: usize, f: &str, n: usize) -> Result<Report, Failure> {
    let al = &p.alphabet;
    let fw = al.parse(f).map_err(|e| Failure::new(Exit::Input, "parse", format!("f: {e}")))?;
    let ctx = context(p, limits, "certify")?;
    let mut cert = ctx.derive_certificate(m, &fw, n).map_err(|e| lemma1_failure("certify", e))?;
    let raw = cert.steps.len();
    cert.simplify();
    let ok = verify_certificate(&cert, &ctx.relators).map_err(|e| lemma1_failure("verify", e))?;
    let lg = &ctx.lifted;
    let file = CertificateFile {
        kind: "certificate".into(),
        generators: al.names().to_vec(),
        m: words(al, &p.a),
        n: words(al, &p.b),
        max_rounds: limits.max_rounds,
        m_index: m,
        n_index: n,
        m_word: al.format(&lg.m_gens[m]),
        n_word: al.format(&lg.n_gens[n]),
        f: al.format(&fw),
        relators: words(al, &ctx.relators.relators),
        certificate: cert.to_json_value(al),
    };
    let text = format!(
        "[m{m}^f, n{n}] with m{m} = {}, n{n} = {}, f = {}\n\
         target: {}\nsteps: {} ({} before cancellation) over {} relators\nverified: {}\n",
        file.m_word,
        file.n_word,
        file.f,
        al.format(&cert.target),
        cert.steps.len(),
        raw,
        ctx.relators.len(),
        if ok { "yes" } else { "NO" }
    );
    let j = json!({
        "kind": "certify",
        "m_index": m,
        "n_index": n,
        "f": file.f,
        "target": al.format(&cert.target),
        "steps": cert.steps.len(),
        "raw_steps": raw,
        "relator_count": ctx.relators.len(),
        "verified": ok,
    });
    let exit = if ok { Exit::Success } else { Exit::Verification };
    let mut rep = Report::new(exit, text, j);
    rep.artifact = Some(serde_json::to_value(&file).expect("artifact serializes"));
    Ok(rep)
}

/// Certifies `count` seeded random triples `(m, f, n)` with `|f| ≤ max_len`.
pub fn certify_random(
    p: &Presentation,
    limits: &Limits,
    count: usize,
    seed: u64,
    max_len: usize,
) -> Result<Report, Failure> {
    let ctx = context(p, limits, "certify")?;
    let lg = &ctx.lifted;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut verified, mut max_steps, mut total) = (0usize, 0usize, 0usize);
    let mut failed = Vec::new();
    for i in 0..count {
        let m = rng.gen_range(0..lg.m_gens.len());
        let n = rng.gen_range(0..lg.n_gens.len());
        let len = rng.gen_range(0..=max_len);
        let f = Word::reduce((0..len).map(|_| {
            mncomm::Letter::new(rng.gen_range(0..p.rank() as u32), rng.gen())
        }));
        let cert = ctx.derive_certificate(m, &f, n).map_err(|e| lemma1_failure("certify", e))?;
        let ok = cert.target == lg.m_gens[m].conjugate(&f).commutator(&lg.n_gens[n])
            && verify_certificate(&cert, &ctx.relators).map_err(|e| lemma1_failure("verify", e))?;
        if ok {
            verified += 1;
        } else {
            failed.push(i);
        }
        max_steps = max_steps.max(cert.steps.len());
        total += cert.steps.len();
    }
    let text = format!(
        "random triples: {count} (seed {seed}, |f| <= {max_len})\nverified: {verified}\n\
         steps: {total} total, {max_steps} max\n"
    );
    let j = json!({
        "kind": "certify-batch",
        "seed": seed,
        "count": count,
        "max_len": max_len,
        "verified": verified,
        "total_steps": total,
        "max_steps": max_steps,
        "failed": failed,
    });
    let exit = if verified == count { Exit::Success } else { Exit::Verification };
    Ok(Report::new(exit, text, j))
}

fn oracle(p: &Presentation, limits: &Limits, spec: &str, stage: &'static str) -> Result<AnyOracle, Failure> {
    let mut refused = None;
    let o = AnyOracle::from_spec(spec, p, || match finite_table(p, limits, stage, Exit::Input) {
        Ok(t) => Ok(t),
        Err(f) => {
            let msg = format!("table backend: {}", f.message);
            refused = Some(f);
            Err(WreathError::Backend(msg))
        }
    });
    match (o, refused) {
        (Ok(o), _) => Ok(o),
        (Err(_), Some(f)) => Err(Failure::new(f.exit, "backend", format!("table backend: {}", f.message))),
        (Err(e), None) => Err(wreath_failure("backend", e)),
    }
}

pub fn class(p: &Presentation, limits: &Limits, backend: &str) -> Result<Report, Failure> {
    let o = oracle(p, limits, backend, "class")?;
    let info = psi_class(p, &o).map_err(|e| wreath_failure("class", e))?;
    let (deep, flat) = if info.swapped { ("N", "M") } else { ("M", "N") };
    let text = format!(
        "c = {}\norientation: {}\n  {deep} (as M): degree {} (word #{})\n  {flat} (as N): degree {} (word #{})\nbackend: {}\n",
        info.c,
        if info.swapped { "swapped" } else { "as given" },
        info.m_degree,
        info.m_witness,
        info.n_degree,
        info.n_witness,
        o.describe()
    );
    let j = json!({
        "kind": "class",
        "backend": o.describe(),
        "c": info.c,
        "swapped": info.swapped,
        "m_degree": info.m_degree,
        "n_degree": info.n_degree,
        "m_witness": info.m_witness,
        "n_witness": info.n_witness,
    });
    Ok(Report::new(Exit::Success, text, j))
}

/// Splits repeated `--Y` values, each possibly a comma list.
pub fn parse_y(al: &Alphabet, raw: &[String]) -> Result<Vec<Word>, Failure> {
    let mut out = Vec::new();
    for r in raw {
        let ws = al
            .parse_list(r)
            .map_err(|e| Failure::new(Exit::Input, "parse", format!("Y: {e}")))?;
        out.extend(ws);
    }
    Ok(out)
}

pub fn witness(p: &Presentation, limits: &Limits, backend: &str, y: &[Word]) -> Result<Report, Failure> {
    let o = oracle(p, limits, backend, "witness")?;
    let cfg = WitnessConfig { budget: limits.budget };
    let w = theorem1_witness(p, y, &o, &cfg).map_err(|e| wreath_failure("witness", e))?;
    let file = w.to_file(p, &o).map_err(|e| wreath_failure("witness", e))?;
    let c = &file.checks;
    let mark = |b: bool| if b { "pass" } else { "FAIL" };
    let text = format!(
        "omega = [u^f, v] = [{}^{}, {}]\n      = {}\n\
         c = {}{}\nbackend: {}\ng = {} (after {} candidates)\nZ = {{{}}}\n\
         (i) supports Z-distant: {}\n(ii) u-tail nontrivial: {}\n(iii) v-tail nontrivial: {}\n",
        wrap(&file.u),
        wrap(&file.f),
        wrap(&file.v),
        file.omega,
        file.c,
        if file.swapped { " (sides swapped)" } else { "" },
        file.backend,
        file.g,
        w.examined,
        file.z.join(", "),
        mark(c.distant),
        mark(c.u_nontrivial),
        mark(c.v_nontrivial),
    );
    let value = serde_json::to_value(&file).expect("witness serializes");
    let mut rep = Report::new(Exit::Success, text, value.clone());
    rep.artifact = Some(value);
    Ok(rep)
}

fn check_certificate(file: &CertificateFile, limits: &Limits) -> Vec<CheckItem> {
    let mut items = Vec::new();
    let mut add = |name: &str, ok: bool| {
        items.push(CheckItem {
            name: name.into(),
            ok,
        });
        ok
    };
    let gens: Vec<&str> = file.generators.iter().map(String::as_str).collect();
    let a: Vec<&str> = file.m.iter().map(String::as_str).collect();
    let b: Vec<&str> = file.n.iter().map(String::as_str).collect();
    let Ok(p) = Presentation::from_strs(&gens, &a, &b) else {
        add("presentation parses", false);
        return items;
    };
    let al = &p.alphabet;
    if !add("kind is `certificate`", file.kind == "certificate") {
        return items;
    }
    let limits = Limits {
        max_rounds: file.max_rounds,
        ..*limits
    };
    let Ok(ctx) = context(&p, &limits, "recheck") else {
        add("[F : MN] finite and saturation reproducible", false);
        return items;
    };
    add("[F : MN] finite and saturation reproducible", true);
    let lg = &ctx.lifted;
    let (Some(m), Some(n)) = (lg.m_gens.get(file.m_index), lg.n_gens.get(file.n_index)) else {
        add("generator indices in range", false);
        return items;
    };
    add(
        "lifted generators match",
        al.parse(&file.m_word).ok().as_ref() == Some(m) && al.parse(&file.n_word).ok().as_ref() == Some(n),
    );
    let parsed: Result<Vec<Word>, _> = file.relators.iter().map(|r| al.parse(r)).collect();
    let Ok(relators) = parsed else {
        add("relators parse", false);
        return items;
    };
    add("relators are the recomputed [m^h, n]", relators == ctx.relators.relators);
    let Ok(cert) = Certificate::from_json_value(al, file.certificate.clone()) else {
        add("certificate well-formed", false);
        return items;
    };
    let target_ok = al
        .parse(&file.f)
        .map(|f| cert.target == m.conjugate(&f).commutator(n))
        .unwrap_or(false);
    add("target is [m^f, n]", target_ok);
    let set = RelatorSet {
        relators,
        index: Default::default(),
        formal_count: 0,
    };
    add(
        "steps multiply to target",
        verify_certificate(&cert, &set).unwrap_or(false),
    );
    items
}

pub fn recheck(artifact: &str, limits: &Limits) -> Result<Report, Failure> {
    let v: Value =
        serde_json::from_str(artifact).map_err(|e| Failure::new(Exit::Input, "parse", format!("artifact: {e}")))?;
    let kind = v.get("kind").and_then(Value::as_str).unwrap_or("").to_string();
    let items = match kind.as_str() {
        "witness" => {
            let file: WitnessFile = serde_json::from_value(v)
                .map_err(|e| Failure::new(Exit::Input, "parse", format!("witness: {e}")))?;
            recheck_witness(&file, &limits.cosets())
                .map_err(|e| wreath_failure("recheck", e))?
                .items
        }
        "certificate" => {
            let file: CertificateFile = serde_json::from_value(v)
                .map_err(|e| Failure::new(Exit::Input, "parse", format!("certificate: {e}")))?;
            check_certificate(&file, limits)
        }
        other => {
            return Err(Failure::new(
                Exit::Input,
                "parse",
                format!("unknown artifact kind `{other}`"),
            ))
        }
    };
    let passed = !items.is_empty() && items.iter().all(|i| i.ok);
    let mut text = String::new();
    for i in &items {
        text += &format!("{} {}\n", if i.ok { "ok  " } else { "FAIL" }, i.name);
    }
    text += &format!("recheck {}: {}\n", kind, if passed { "passed" } else { "failed" });
    let j = json!({"kind": "recheck", "artifact": kind, "passed": passed, "items": items});
    let exit = if passed { Exit::Success } else { Exit::Verification };
    Ok(Report::new(exit, text, j))
}
