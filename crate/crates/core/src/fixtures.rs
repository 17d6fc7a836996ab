//! Named worked examples with known answers, runnable as a self-check.

use serde::Serialize;

use crate::classify::{
    base_locus_peel, classify_minus_one, cremona_reduce, numeric_minus_one, pairing_obstruction,
    ReduceStatus, Verdict, DEFAULT_PEEL_BUDGET,
};
use crate::cremona::{apply_word, cremona_apply, noether_indices, IndexSet, WeylWord};
use crate::dimension::ghh_expected_dim;
use crate::error::Result;
use crate::lattice::{adeg, chi, mukai_pairing, parse_divisor, planar_conditions, DivisorClass};
use crate::oracle::{cremona_h0_check, h0_dimension};
use crate::orbit::{enumerate, verify_table, CanonicalForm, OrbitEntry};

/// Settings shared by every fixture.
#[derive(Debug, Clone, Copy, Default)]
pub struct FixtureContext {
    /// Negates every pairing computed through the context. Used to check that
    /// the suite notices a broken pairing.
    #[doc(hidden)]
    pub flip_pairing_sign: bool,
    pub seed: u64,
}

impl FixtureContext {
    fn pair(&self, a: &DivisorClass, b: &DivisorClass) -> Result<i64> {
        let v = mukai_pairing(a, b)?;
        Ok(if self.flip_pairing_sign { -v } else { v })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixtureOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// Observed value, or the error message.
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixtureReport {
    pub fixtures: Vec<FixtureOutcome>,
    pub passed: usize,
    pub failed: usize,
    pub total: usize,
}

type Check = fn(&FixtureContext) -> Result<(bool, String)>;

fn dc(s: &str) -> DivisorClass {
    parse_divisor(s).expect("fixture literal")
}

fn expect<T: PartialEq + std::fmt::Debug>(got: T, want: T) -> Result<(bool, String)> {
    let ok = got == want;
    Ok((ok, format!("{got:?}")))
}

fn set(indices: &[usize], n: usize, s: usize) -> IndexSet {
    IndexSet::new(indices.to_vec(), n, s).expect("fixture index set")
}

const QUARTIC_TRIPLE: &str = "3:4:3,3,3,1,1,1,1,1,1";
const DECIC: &str = "3:10:7,6,6,6,6,1,1,1,1,1,1,1,1";
const QUINTIC_SEXTUPLE: &str = "3:5:6,2,1,1,1,1,1,1,1,1,1,1,1";
const CUBIC_SEVEN_DOUBLE: &str = "4:3:2,2,2,2,2,2,2";
const QUADRIC_NINE: &str = "3:2:1,1,1,1,1,1,1,1,1";
const QUADRIC_FOURTEEN: &str = "4:2:1,1,1,1,1,1,1,1,1,1,1,1,1,1";
const SEXTIC_NINE_DOUBLE: &str = "2:6:2,2,2,2,2,2,2,2,2";
const QUINTIC_TWO_TRIPLE: &str = "2:5:3,3,1,1,1,1,1,1,1,1";

fn word_i123() -> WeylWord {
    WeylWord::new(vec![
        set(&[1, 2, 3, 4, 5], 4, 7),
        set(&[1, 2, 3, 6, 7], 4, 7),
        set(&[3, 4, 5, 6, 7], 4, 7),
    ])
}

const FIXTURES: &[(&str, Check)] = &[
    ("hyperplane self-pairing in P3", |c| {
        let h = DivisorClass::hyperplane(3, 0)?;
        expect(c.pair(&h, &h)?, 2)
    }),
    ("quartic with three triple points: self-pairing", |c| {
        let d = dc(QUARTIC_TRIPLE);
        expect(c.pair(&d, &d)?, -1)
    }),
    ("decic in X(3,13): self-pairing and adeg", |c| {
        let d = dc(DECIC);
        expect((c.pair(&d, &d)?, adeg(&d)?), (-1, 1))
    }),
    ("quintic with sextuple point: self-pairing and adeg", |c| {
        let d = dc(QUINTIC_SEXTUPLE);
        expect((c.pair(&d, &d)?, adeg(&d)?), (-1, 1))
    }),
    (
        "quadric through nine points in P3: adeg and self-pairing",
        |c| {
            let d = dc(QUADRIC_NINE);
            expect((adeg(&d)?, c.pair(&d, &d)?), (-1, -1))
        },
    ),
    (
        "quadric through fourteen points in P4: adeg and self-pairing",
        |c| {
            let d = dc(QUADRIC_FOURTEEN);
            expect((adeg(&d)?, c.pair(&d, &d)?), (-4, -2))
        },
    ),
    ("chi of cubic with seven double points in P4", |_| {
        expect(chi(&dc(CUBIC_SEVEN_DOUBLE))?, 0)
    }),
    ("chi of quadric through nine points in P3", |_| {
        expect(chi(&dc(QUADRIC_NINE))?, 1)
    }),
    (
        "chi of cubic with three double points and six simple points in P3",
        |_| expect(chi(&dc("3:3:2,2,2,1,1,1,1,1,1"))?, 2),
    ),
    ("chi of plane sextic with nine double points", |_| {
        expect(chi(&dc(SEXTIC_NINE_DOUBLE))?, 1)
    }),
    (
        "sextic with nine double points: self-pairing and genus conditions fail",
        |_| {
            let p = planar_conditions(&dc(SEXTIC_NINE_DOUBLE))?;
            expect(
                (
                    p.self_pairing_minus_one,
                    p.genus_zero,
                    p.adeg_one,
                    p.chi_one,
                ),
                (false, false, false, true),
            )
        },
    ),
    (
        "planar conditions hold for quintic with two triple points",
        |_| {
            let p = planar_conditions(&dc(QUINTIC_TWO_TRIPLE))?;
            expect(p.count(), 4)
        },
    ),
    ("first Cremona step on E3 in X(4,7)", |_| {
        let e3 = DivisorClass::exceptional(4, 7, 3)?;
        let got = cremona_apply(&e3, &set(&[3, 4, 5, 6, 7], 4, 7))?;
        expect(got, dc("4:1:0,0,0,1,1,1,1"))
    }),
    ("standard Cremona on a plane line", |_| {
        let h = DivisorClass::hyperplane(2, 3)?;
        expect(cremona_apply(&h, &IndexSet::first(2, 3)?)?, dc("2:2:1,1,1"))
    }),
    (
        "three-step word carries E3 to cubic with seven double points",
        |_| {
            let e3 = DivisorClass::exceptional(4, 7, 3)?;
            expect(apply_word(&e3, &word_i123())?, dc(CUBIC_SEVEN_DOUBLE))
        },
    ),
    ("no Noether set for quintic with sextuple point", |_| {
        expect(noether_indices(&dc(QUINTIC_SEXTUPLE))?, None)
    }),
    ("decic in X(3,13) satisfies the numeric conditions", |_| {
        expect(numeric_minus_one(&dc(DECIC))?, true)
    }),
    (
        "quadric through nine points fails the numeric conditions",
        |_| expect(numeric_minus_one(&dc(QUADRIC_NINE))?, false),
    ),
    (
        "exceptional divisor satisfies the numeric conditions",
        |_| {
            expect(
                numeric_minus_one(&DivisorClass::exceptional(3, 5, 1)?)?,
                true,
            )
        },
    ),
    ("cubic with seven double points is a (-1) class", |_| {
        let r = classify_minus_one(&dc(CUBIC_SEVEN_DOUBLE))?;
        let terminal_ok = r
            .terminal
            .as_ref()
            .is_some_and(DivisorClass::is_exceptional);
        let len = r.witness.as_ref().map_or(0, WeylWord::len);
        expect(
            (r.verdict, len, terminal_ok),
            (Verdict::MinusOneClass, 3, true),
        )
    }),
    (
        "quintic with sextuple point: multiplicity exceeds degree",
        |_| {
            let r = classify_minus_one(&dc(QUINTIC_SEXTUPLE))?;
            expect(
                (r.verdict, r.steps),
                (Verdict::MultiplicityExceedsDegree, 0),
            )
        },
    ),
    ("decic in X(3,13) fails after one Cremona step", |_| {
        let r = classify_minus_one(&dc(DECIC))?;
        let reached = CanonicalForm::of(&r.reached);
        expect(
            (r.verdict, r.steps, reached),
            (
                Verdict::MultiplicityExceedsDegree,
                1,
                CanonicalForm::of(&dc(QUINTIC_SEXTUPLE)),
            ),
        )
    }),
    ("plane through three triple points obstructs quartic", |c| {
        let d = dc(QUARTIC_TRIPLE);
        let ob = pairing_obstruction(&d, 3)?;
        let got = match ob {
            Some(o) => Some((o.obstructor.clone(), c.pair(&d, &o.obstructor)?)),
            None => None,
        };
        expect(got, Some((dc("3:1:1,1,1,0,0,0,0,0,0"), -1)))
    }),
    (
        "line through two triple points obstructs plane quintic",
        |c| {
            let d = dc(QUINTIC_TWO_TRIPLE);
            let ob = pairing_obstruction(&d, 4)?;
            let got = match ob {
                Some(o) => Some((o.obstructor.clone(), c.pair(&d, &o.obstructor)?)),
                None => None,
            };
            expect(got, Some((dc("2:1:1,1,0,0,0,0,0,0,0,0"), -1)))
        },
    ),
    (
        "peeling the plane from the quartic with triple points",
        |_| {
            let p = base_locus_peel(&dc(QUARTIC_TRIPLE), 3, DEFAULT_PEEL_BUDGET)?;
            let first = p
                .components
                .first()
                .map(|c| (c.obstructor.clone(), c.multiplicity));
            expect(
                (first, p.components.len(), p.residual),
                (
                    Some((dc("3:1:1,1,1,0,0,0,0,0,0"), 1)),
                    1,
                    dc("3:3:2,2,2,1,1,1,1,1,1"),
                ),
            )
        },
    ),
    ("peeling the line from the plane quintic", |_| {
        let p = base_locus_peel(&dc(QUINTIC_TWO_TRIPLE), 4, 1)?;
        let first = p
            .components
            .first()
            .map(|c| (c.obstructor.clone(), c.multiplicity));
        expect(
            (first, p.residual),
            (
                Some((dc("2:1:1,1,0,0,0,0,0,0,0,0"), 1)),
                dc("2:4:2,2,1,1,1,1,1,1,1,1"),
            ),
        )
    }),
    (
        "cubic with seven double points reduces to an exceptional class",
        |_| {
            let r = cremona_reduce(&dc(CUBIC_SEVEN_DOUBLE))?;
            expect(
                (r.class.is_exceptional(), r.word.len(), r.status),
                (true, 3, ReduceStatus::Reduced),
            )
        },
    ),
    ("27 lines on the cubic surface", |_| {
        expect(enumerate(2, 6, 2)?.total(), 27)
    }),
    (
        "census of X(4,7) contains the cubic with seven double points",
        |_| expect(enumerate(4, 7, 3)?.contains(&dc(CUBIC_SEVEN_DOUBLE)), true),
    ),
    (
        "census with the quadric through nine points fails verification",
        |_| expect(verify_table(&injected(QUADRIC_NINE, 2)?), false),
    ),
    (
        "census with the quintic with sextuple point fails verification",
        |_| expect(verify_table(&injected(QUINTIC_SEXTUPLE, 2)?), false),
    ),
    ("corrected count for sextic with nine double points", |_| {
        expect(ghh_expected_dim(&dc(SEXTIC_NINE_DOUBLE), 6)?, 1)
    }),
    ("sections of cubic with seven double points in P4", |c| {
        expect(h0_dimension(&dc(CUBIC_SEVEN_DOUBLE), c.seed, 3)?.h0, 1)
    }),
    (
        "Cremona preserves sections of cubic with seven double points",
        |c| {
            let d = dc(CUBIC_SEVEN_DOUBLE);
            expect(
                cremona_h0_check(&d, &set(&[1, 2, 3, 4, 5], 4, 7), c.seed)?,
                true,
            )
        },
    ),
    (
        "quartic double along nine points in P3 has one section",
        |c| expect(h0_dimension(&dc(&double(QUADRIC_NINE)), c.seed, 3)?.h0, 1),
    ),
    (
        "quartic double along fourteen points in P4 has one section",
        |c| {
            expect(
                h0_dimension(&dc(&double(QUADRIC_FOURTEEN)), c.seed, 3)?.h0,
                1,
            )
        },
    ),
];

fn double(literal: &str) -> String {
    dc(literal).checked_scale(2).expect("small").to_string()
}

/// A verified census with one extra entry appended.
fn injected(literal: &str, max_degree: i64) -> Result<crate::orbit::OrbitTable> {
    let extra = dc(literal);
    let mut table = enumerate(extra.n(), extra.s(), max_degree)?;
    let form = CanonicalForm::of(&extra);
    let perms = form.permutation_count()?;
    table.entries.push(OrbitEntry {
        d: form.d,
        m: form.m,
        perms,
    });
    table.entries.sort_by(|a, b| (a.d, &a.m).cmp(&(b.d, &b.m)));
    Ok(table)
}

pub fn fixture_names() -> Vec<&'static str> {
    FIXTURES.iter().map(|(name, _)| *name).collect()
}

pub fn run_fixtures(ctx: &FixtureContext) -> FixtureReport {
    let fixtures: Vec<FixtureOutcome> = FIXTURES
        .iter()
        .map(|(name, check)| match check(ctx) {
            Ok((passed, detail)) => FixtureOutcome {
                name,
                passed,
                detail,
            },
            Err(e) => FixtureOutcome {
                name,
                passed: false,
                detail: format!("error: {e}"),
            },
        })
        .collect();
    let passed = fixtures.iter().filter(|f| f.passed).count();
    FixtureReport {
        total: fixtures.len(),
        failed: fixtures.len() - passed,
        passed,
        fixtures,
    }
}
