//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fail.

mod common;

use std::collections::HashSet;
use std::time::{Duration, Instant};

use ascending_hnn::ball::{build_ball, components_minus};
use ascending_hnn::depth::{chain_inclusion_probe, depth_witness_check, DepthSetting, ProbeConfig, WitnessCheck};
use ascending_hnn::endo::Endomorphism;
use ascending_hnn::exec::Execution;
use ascending_hnn::hnn::{canonical_form, level, Truth};
use ascending_hnn::homotopy::{build_push, fp_complement_trivialize, replay, verify_levels, Trivialization};
use ascending_hnn::oracle::{SearchBudget, Verdict};
use ascending_hnn::regions::{classify, in_D, RegionLabel};
use ascending_hnn::stallings::{build_subgroup_graph, image_rank_sequence, monomorphize, ImageGraph};
use ascending_hnn::word::{Alphabet, Letter, Word};
use common::{bs23, doubling, grigorchuk};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn random_word(rng: &mut ChaCha8Rng, letters: &[Letter], max: usize) -> Word {
    let len = rng.gen_range(0..=max);
    Word::reduce((0..len).map(|_| letters[rng.gen_range(0..letters.len())]))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed < limit, || format!("{what} took {elapsed:?}, limit {limit:?}"))
}

fn britton_forms() -> Outcome {
    let start = Instant::now();
    let p = doubling();
    let letters = p.full_alphabet().letters();
    let r = p.conjugation_relator('a');
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10_000 {
        let u = random_word(&mut rng, &letters, 20);
        let v = random_word(&mut rng, &letters, 20);
        let direct = canonical_form(&u.mul(&v), &p).map_err(|e| e.to_string())?;
        let fu = canonical_form(&u, &p).map_err(|e| e.to_string())?.to_word('t');
        let fv = canonical_form(&v, &p).map_err(|e| e.to_string())?.to_word('t');
        let via = canonical_form(&fu.mul(&fv), &p).map_err(|e| e.to_string())?;
        ensure(direct == via, || format!("form of `{u}`·`{v}` is {direct}, via forms {via}"))?;

        let raw: Vec<Letter> = u.letters().iter().chain(v.letters()).copied().collect();
        let at = rng.gen_range(0..=raw.len());
        let shift = random_word(&mut rng, &letters, 3);
        let boundary = if rng.gen_bool(0.5) { r.clone() } else { r.inverse() }.conjugate_by(&shift);
        let inserted = Word::reduce(raw[..at].iter().chain(boundary.letters()).chain(&raw[at..]).copied());
        let with = canonical_form(&inserted, &p).map_err(|e| e.to_string())?;
        ensure(with == direct, || format!("inserting `{boundary}` into `{}` changed {direct} to {with}", u.mul(&v)))?;
    }
    within(start.elapsed(), Duration::from_secs(10), "10000 pairs")?;
    Ok("10000 pairs".into())
}

fn region_labels() -> Outcome {
    let p = doubling();
    let ball = build_ball(&p, 8, Execution::Parallel).map_err(|e| e.to_string())?;
    let mut checked = 0usize;
    let mut disagreements = Vec::new();
    for n in 0..=2usize {
        for m in 0..=2usize {
            let labels: Vec<RegionLabel> = ball.vertices.iter().map(|v| classify(&v.word, n, m, &p)).collect();
            let comps = components_minus(&ball, |v| labels[v.id] == RegionLabel::InD);
            let k0 = ball.find(&p, &p.t_pow(n as i64 + 1)).ok_or("t^(N+1) missing from the ball")?;
            for v in ball.vertices.iter().filter(|v| v.distance <= 5) {
                checked += 1;
                let in_k0 = comps.same(v.id, k0);
                let ok = match labels[v.id] {
                    RegionLabel::InD => comps.component_of[v.id].is_none(),
                    RegionLabel::SpecialK0 => in_k0,
                    RegionLabel::OtherComponent => !in_k0,
                    RegionLabel::Unknown => false,
                };
                if !ok {
                    disagreements.push(format!("{} ({:?}, N={n}, M={m})", v.word, labels[v.id]));
                }
            }
        }
    }
    ensure(disagreements.is_empty(), || format!("{} disagreements, first {}", disagreements.len(), disagreements[0]))?;
    Ok(format!("{checked} vertex checks, 0 disagreements"))
}

fn depth_witnesses() -> Outcome {
    let setting = DepthSetting::from_presentation(&bs23()).map_err(|e| e.to_string())?;
    let mut slowest = Duration::ZERO;
    for n in 1..=4 {
        let w = Word::parse_expr(&format!("[b^-{n} a b^{n}, a]")).map_err(|e| e.to_string())?;
        let start = Instant::now();
        let check = depth_witness_check(&w, n, &setting).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        within(elapsed, Duration::from_secs(1), &format!("witness n={n}"))?;
        slowest = slowest.max(elapsed);
        let wit = check.accepted().ok_or_else(|| format!("n={n}: {check:?}"))?;
        ensure(wit.nontrivial_leg.value == Verdict::Nontrivial, || format!("n={n}: nontrivial leg {:?}", wit.nontrivial_leg.value))?;
        ensure(wit.trivial_leg.certificate.is_some(), || format!("n={n}: trivial leg has no certificate"))?;
    }
    let start = Instant::now();
    let rel = depth_witness_check(&Word::parse("BaabAAA").unwrap(), 1, &setting).map_err(|e| e.to_string())?;
    within(start.elapsed(), Duration::from_secs(1), "relator check")?;
    ensure(matches!(rel, WitnessCheck::Rejected(_)), || format!("relator: {rel:?}"))?;
    Ok(format!("n=1..4 accepted, relator rejected, slowest {slowest:?}"))
}

fn grigorchuk_fixtures() -> Outcome {
    let start = Instant::now();
    let p = grigorchuk();
    let oracle = p.oracle();
    let mut trivial = 0;
    for r in ["aa", "(ad)^4", "(adacac)^4"] {
        let w = Word::parse_expr(r).unwrap();
        for k in 0..=2 {
            let image = p.phi().image_k(&w, k);
            let v = oracle.is_identity(&image);
            ensure(v.value == Verdict::Trivial, || format!("sigma^{k}({r}) = `{image}`: {:?}", v.value))?;
            trivial += 1;
        }
    }
    for w in ["ad", "adad", "ac"] {
        let v = oracle.is_identity(&Word::parse(w).unwrap());
        ensure(v.value == Verdict::Nontrivial, || format!("{w}: {:?}", v.value))?;
    }
    within(start.elapsed(), Duration::from_secs(1), "fixtures")?;
    Ok(format!("{trivial} trivial, 3 nontrivial, {:?}", start.elapsed()))
}

fn push_certificates() -> Outcome {
    let p = doubling();
    let ball = build_ball(&p, 4, Execution::Parallel).map_err(|e| e.to_string())?;
    let rows = 6;
    let a = Letter::new('a', false);
    let mut edges = 0;
    for e in ball.edges.iter().filter(|e| e.label == 'a') {
        let v = &ball.vertices[e.source].word;
        let h = build_push(v, a, rows, &p).map_err(|e| e.to_string())?;
        let cert = verify_levels(&h, &p).map_err(|e| format!("push at `{v}`: {e}"))?;
        let base = level(v, 't');
        for k in 0..rows {
            ensure(cert.rows[k] == (base + k as i64, base + k as i64 + 1), || format!("push at `{v}` row {k}: {:?}", cert.rows[k]))?;
            ensure(h.rows[k].cells.len() == 1 << k, || format!("push at `{v}` row {k}: {} cells", h.rows[k].cells.len()))?;
        }
        for k in 1..h.rows.len() {
            ensure(h.rows[k].label == p.phi().image(&h.rows[k - 1].label), || format!("push at `{v}`: recurrence fails at row {k}"))?;
        }
        edges += 1;
    }
    ensure(edges > 0, || "no A-edges in the ball".into())?;
    let mut bad = build_push(&Word::empty(), a, rows, &p).unwrap();
    let cell = &mut bad.rows[3].cells[2];
    cell.anchor = cell.anchor.mul(&Word::parse("a").unwrap());
    ensure(verify_levels(&bad, &p).is_err(), || "corrupted cell passed verification".into())?;
    Ok(format!("{edges} edges, K={rows}, corrupted control rejected"))
}

fn stallings_membership() -> Outcome {
    let alphabet = Alphabet::from_letters("ab").unwrap();
    let all = alphabet.reduced_words_up_to(6);
    let maps = [
        ([('a', "aa"), ('b', "b")], vec![2, 2, 2, 2], Some(0)),
        ([('a', "a"), ('b', "a")], vec![2, 1, 1, 1], Some(1)),
        ([('a', "b"), ('b', "b")], vec![2, 1, 1, 1], Some(1)),
    ];
    let mut queries = 0;
    for (pairs, ranks, stable) in maps {
        let phi = Endomorphism::from_pairs(&alphabet, pairs).map_err(|e| e.to_string())?;
        let name = format!("{pairs:?}");
        let images: HashSet<Word> = all.iter().map(|u| phi.image(u)).collect();
        let graph = ImageGraph::new(&phi);
        for w in &all {
            let (member, pre) = graph.member(w);
            ensure(member == images.contains(w), || format!("{name}: membership of `{w}`"))?;
            if let Some(u) = pre {
                ensure(&phi.image(&u) == w, || format!("{name}: bad preimage of `{w}`"))?;
            }
            queries += 1;
        }
        let got = image_rank_sequence(&phi, 3);
        ensure(got == (ranks.clone(), stable), || format!("{name}: ranks {got:?}"))?;
        let mono = monomorphize(&phi, 4).map_err(|e| e.to_string())?;
        ensure(mono.phi_prime_is_injective(), || format!("{name}: phi' not injective"))?;
        ensure(build_subgroup_graph(&mono.basis_words).rank() == mono.basis_alphabet.len(), || format!("{name}: basis not free"))?;
        for (i, &g) in alphabet.generators().iter().enumerate() {
            let x = Word::parse(&g.to_string()).unwrap();
            let lhs = mono.express(&phi.image_k(&x, mono.m + 1)).ok_or_else(|| format!("{name}: image escapes the basis"))?;
            ensure(lhs == mono.phi_prime.image(&mono.rho_prime[i]), || format!("{name}: rho' does not intertwine at {g}"))?;
        }
    }
    Ok(format!("{queries} membership queries"))
}

fn up_property() -> Outcome {
    let p = doubling();
    let ball = build_ball(&p, 8, Execution::Parallel).map_err(|e| e.to_string())?;
    let suffixes = p.alphabet().reduced_words_up_to(3);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut sampled = 0;
    let mut checks = 0;
    while sampled < 200 {
        let (n, m) = (rng.gen_range(0..=2usize), rng.gen_range(0..=2usize));
        let v = &ball.vertices[rng.gen_range(0..ball.vertices.len())].word;
        if classify(v, n, m, &p) != RegionLabel::SpecialK0 {
            continue;
        }
        sampled += 1;
        for k in 0..=6 {
            let up = v.mul(&p.t_pow(k));
            for u in &suffixes {
                let w = up.mul(u);
                ensure(in_D(&w, n, m, &p) == Truth::False, || format!("`{w}` from `{v}` meets D({n},{m})"))?;
                checks += 1;
            }
        }
    }
    Ok(format!("200 vertices, {checks} in_D checks"))
}

fn complement_fillings() -> Outcome {
    let p = bs23();
    let (n, m) = (0usize, 1usize);
    let letters = p.full_alphabet().letters();
    let rels = p.all_relators();
    let budget = SearchBudget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut certified, mut unknown, mut others) = (0, 0, 0);
    let mut loops = 0;
    let mut attempts = 0;
    while loops < 20 {
        attempts += 1;
        ensure(attempts < 10_000, || "could not sample 20 admissible loops".into())?;
        let want_other = loops % 2 == 0;
        let base = random_word(&mut rng, &letters, 6);
        let label = classify(&base, n, m, &p);
        if label == RegionLabel::InD || label == RegionLabel::Unknown || (label == RegionLabel::OtherComponent) != want_other {
            continue;
        }
        let x = random_word(&mut rng, &letters, 2);
        let r = &rels[rng.gen_range(0..rels.len())];
        let loop_word = if rng.gen_bool(0.5) { r.clone() } else { r.inverse() }.conjugate_by(&x.inverse());
        let mut prefix = Word::empty();
        let mut avoids = true;
        for l in loop_word.letters() {
            prefix = prefix.mul(&Word::letter(*l));
            avoids &= in_D(&base.mul(&prefix), n, m, &p) == Truth::False;
        }
        if !avoids {
            continue;
        }
        loops += 1;
        if label == RegionLabel::OtherComponent {
            others += 1;
        }
        match fp_complement_trivialize(&base, &loop_word, n, m, &budget, &p).map_err(|e| format!("`{loop_word}` at `{base}`: {e}"))? {
            Trivialization::Certified(cert, report) => {
                let again = replay(&cert, &p).map_err(|e| format!("`{loop_word}` at `{base}`: replay: {e}"))?;
                ensure(again == report && cert.avoid.is_some(), || format!("`{loop_word}` at `{base}`: replay mismatch"))?;
                if label == RegionLabel::OtherComponent {
                    let lift = (n as i64) - (m as i64) - 1;
                    ensure(report.max_level <= lift, || format!("`{loop_word}` at `{base}`: rose to {}", report.max_level))?;
                }
                certified += 1;
            }
            Trivialization::Unknown(why) => {
                ensure(label != RegionLabel::OtherComponent, || format!("OtherComponent loop `{loop_word}` at `{base}` unresolved: {why}"))?;
                unknown += 1;
            }
            Trivialization::Nontrivial(why) => return Err(format!("relator loop `{loop_word}` called nontrivial: {why}")),
        }
    }
    Ok(format!("20 loops ({others} OtherComponent): {certified} certified, {unknown} unknown"))
}

fn chain_probe() -> Outcome {
    let p = bs23();
    let config = ProbeConfig { samples: 50, ..ProbeConfig::default() };
    let report = chain_inclusion_probe(&p, &config, SearchBudget::default(), Execution::Parallel);
    ensure(report.samples.len() == 50, || format!("{} samples", report.samples.len()))?;
    ensure(report.refuted == 0, || format!("{} refuted", report.refuted))?;
    ensure(report.unknown_rate() < 0.10, || format!("{} unknown", report.unknown))?;
    Ok(format!("{} confirmed, {} unknown, 0 refuted", report.confirmed, report.unknown))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("britton forms on the doubling group", britton_forms),
        ("region labels vs ball components", region_labels),
        ("BS(2,3) depth witnesses", depth_witnesses),
        ("Grigorchuk oracle fixtures", grigorchuk_fixtures),
        ("push homotopy level certificates", push_certificates),
        ("Stallings membership vs brute force", stallings_membership),
        ("special vertices stay out of D going up", up_property),
        ("complement fillings on BS(2,3)", complement_fillings),
        ("chain inclusion probe", chain_probe),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
