//! The symbolic boundary catalog.
//!
//! The boundary of every carpet graph decomposes into four family kinds,
//! driven by which digits occur infinitely often. Writing `I` for the
//! infinite odd digits and `J` for the infinite even digits:
//!
//! * each `i ∈ I` contributes the non-Busemann antipodal family `ζ` (indexed
//!   by all integer shifts) and one Busemann point `β` per flanking quadrant;
//! * each direction with growth but no obstruction (flanks of `I`, odd
//!   neighbors of `J`) contributes a Busemann family `ξ` and a non-Busemann
//!   family `η`, indexed by an infinite set of transverse offsets;
//! * when `I` is empty, each `j ∈ J` contributes the single Busemann point
//!   `β` of its quadrant.
//!
//! Quadrant points are deduplicated, so a word using all eight digits gets
//! exactly four `β` and four `ζ` families.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::boundary::{
    antipodal_sequence, axis_ray_families, classify_directions, corner_and_fg_sequences,
    diagonal_sequence, distinguish, hole_far_corners, nonbusemann_witness, shifted_antipodal,
    BoundaryError, DiagonalDirection, Direction, DirectionProfile, Distinction,
};
use crate::build::{build_level_with_cap, DEFAULT_LEVEL_CAP};
use crate::metric::{ball, constrained_distance, distance, phi, DistCache};
use crate::word::{Letter, WordSpec};

/// Family label in the boundary classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyLabel {
    /// Antipodal non-Busemann family of an obstructed direction.
    Zeta,
    /// Diagonal Busemann point of a quadrant.
    Beta,
    /// Busemann family of straight rays in an unobstructed growth direction.
    Xi,
    /// Non-Busemann family of obstructed rays in the same direction.
    Eta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Busemann,
    NonBusemann,
}

/// Which transverse offsets index a `ξ`/`η` family: `right` means unbounded
/// toward the counterclockwise flank (`d_{i+2}`), `left` toward the
/// clockwise flank, `bi` both ways.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexSide {
    Left,
    Right,
    Bi,
}

/// Index-set descriptor of one family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum IndexSet {
    Singleton,
    AllOfZ,
    InfiniteSubsetOfZ { side: IndexSide },
}

/// One family of boundary points. Serializes with a single `direction`
/// field carrying the axis code (`d7`) or the quadrant code (`d71`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryFamily {
    pub label: FamilyLabel,
    pub direction: Option<Direction>,
    pub quadrant: Option<DiagonalDirection>,
    pub kind: Kind,
    pub index_set: IndexSet,
}

impl Serialize for BoundaryFamily {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("BoundaryFamily", 4)?;
        st.serialize_field("label", &self.label)?;
        let code = self
            .direction
            .map(Direction::code)
            .or(self.quadrant.map(DiagonalDirection::code));
        st.serialize_field("direction", &code)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("index_set", &self.index_set)?;
        st.end()
    }
}

impl BoundaryFamily {
    fn zeta(dir: Direction) -> Self {
        BoundaryFamily {
            label: FamilyLabel::Zeta,
            direction: Some(dir),
            quadrant: None,
            kind: Kind::NonBusemann,
            index_set: IndexSet::AllOfZ,
        }
    }

    fn beta(quad: DiagonalDirection) -> Self {
        BoundaryFamily {
            label: FamilyLabel::Beta,
            direction: None,
            quadrant: Some(quad),
            kind: Kind::Busemann,
            index_set: IndexSet::Singleton,
        }
    }

    fn xi(dir: Direction, side: IndexSide) -> Self {
        BoundaryFamily {
            label: FamilyLabel::Xi,
            direction: Some(dir),
            quadrant: None,
            kind: Kind::Busemann,
            index_set: IndexSet::InfiniteSubsetOfZ { side },
        }
    }

    fn eta(dir: Direction, side: IndexSide) -> Self {
        BoundaryFamily {
            label: FamilyLabel::Eta,
            direction: Some(dir),
            quadrant: None,
            kind: Kind::NonBusemann,
            index_set: IndexSet::InfiniteSubsetOfZ { side },
        }
    }

    /// Short display tag, e.g. `zeta(d7)` or `beta(d71)`.
    pub fn tag(&self) -> String {
        let label = match self.label {
            FamilyLabel::Zeta => "zeta",
            FamilyLabel::Beta => "beta",
            FamilyLabel::Xi => "xi",
            FamilyLabel::Eta => "eta",
        };
        match (self.direction, self.quadrant) {
            (Some(d), _) => format!("{label}({})", d.code()),
            (_, Some(q)) => format!("{label}({})", q.code()),
            _ => label.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Not enough realized levels at the built scale to run the check.
    Insufficient,
}

/// One numeric check attached to a family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvidenceCheck {
    pub name: String,
    pub levels: Vec<u32>,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyEvidence {
    pub family: String,
    pub checks: Vec<EvidenceCheck>,
}

/// The symbolic classification of one word's boundary, with the numeric
/// evidence gathered at the built level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryCatalog {
    pub word: WordSpec,
    pub profile: DirectionProfile,
    pub families: Vec<BoundaryFamily>,
    pub evidence: Vec<FamilyEvidence>,
}

impl BoundaryCatalog {
    pub fn family_tags(&self) -> Vec<String> {
        self.families.iter().map(BoundaryFamily::tag).collect()
    }

    pub fn non_busemann_families(&self) -> Vec<&BoundaryFamily> {
        self.families
            .iter()
            .filter(|f| f.kind == Kind::NonBusemann)
            .collect()
    }

    /// The family list with all directions rotated counterclockwise by
    /// `quarter_turns` quadrants; rotation preserves orientation, so index
    /// sides are kept.
    pub fn rotated_families(&self, quarter_turns: u32) -> Vec<BoundaryFamily> {
        let rot_dir = |mut d: Direction| {
            for _ in 0..quarter_turns % 4 {
                d = d.next_ccw();
            }
            d
        };
        let mut families: Vec<BoundaryFamily> = self
            .families
            .iter()
            .map(|f| BoundaryFamily {
                label: f.label,
                direction: f.direction.map(rot_dir),
                quadrant: f.quadrant.map(|q| {
                    DiagonalDirection::between(rot_dir(q.first()), rot_dir(q.second())).unwrap()
                }),
                kind: f.kind,
                index_set: f.index_set,
            })
            .collect();
        families.sort_by_key(family_sort_key);
        families
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CatalogOptions {
    /// Build level used for the numeric evidence.
    pub max_level: u32,
    pub level_cap: u32,
    pub probe_radius: u32,
    /// Stabilization window for value comparisons.
    pub window: usize,
    /// Transverse scan bound for axis-ray evidence.
    pub k_bound: i64,
    /// Skip all numeric evidence (symbolic catalog only).
    pub skip_evidence: bool,
}

impl Default for CatalogOptions {
    fn default() -> Self {
        CatalogOptions {
            max_level: 6,
            level_cap: DEFAULT_LEVEL_CAP,
            probe_radius: 2,
            window: 2,
            k_bound: 12,
            skip_evidence: false,
        }
    }
}

// zeta families first, then beta, then xi/eta interleaved per direction
fn family_sort_key(f: &BoundaryFamily) -> (u8, u8, u8, u8) {
    let (group, label) = match f.label {
        FamilyLabel::Zeta => (0, 0),
        FamilyLabel::Beta => (1, 0),
        FamilyLabel::Xi => (2, 0),
        FamilyLabel::Eta => (2, 1),
    };
    let dir = f.direction.map_or(0, |d| d.letter().value());
    let quad = f.quadrant.map_or(0, |q| q.first().letter().value());
    (group, dir, quad, label)
}

fn index_side(profile: &DirectionProfile, dir: Direction) -> IndexSide {
    let pos = profile.grows(dir.next_ccw());
    let neg = profile.grows(dir.next_cw());
    match (pos, neg) {
        (true, true) => IndexSide::Bi,
        (true, false) => IndexSide::Right,
        // at least one flank grows whenever dir itself grows
        _ => IndexSide::Left,
    }
}

/// The symbolic family list for one word, by the case split on the infinite
/// odd and even digits.
pub fn classify_families(w: &WordSpec) -> (DirectionProfile, Vec<BoundaryFamily>) {
    let profile = classify_directions(w);
    let counts = w.letter_profile();
    let odd_infinite: Vec<Direction> = Direction::ALL
        .into_iter()
        .filter(|d| counts.is_infinite(d.letter()))
        .collect();
    let even_infinite: Vec<u8> = [0u8, 2, 4, 6]
        .into_iter()
        .filter(|&j| counts.is_infinite(Letter::new(j).unwrap()))
        .collect();

    let mut families = Vec::new();
    let mut quads = BTreeSet::new();
    let mut ray_dirs = BTreeSet::new();

    if !odd_infinite.is_empty() {
        for &dir in &odd_infinite {
            families.push(BoundaryFamily::zeta(dir));
            quads.insert(DiagonalDirection::between(dir.next_cw(), dir).unwrap());
            quads.insert(DiagonalDirection::between(dir, dir.next_ccw()).unwrap());
            for flank in [dir.next_cw(), dir.next_ccw()] {
                if !odd_infinite.contains(&flank) {
                    ray_dirs.insert(flank);
                }
            }
        }
        for &j in &even_infinite {
            for h in [(j + 7) % 8, (j + 1) % 8] {
                let dir = Direction::from_letter(Letter::new(h).unwrap()).unwrap();
                if !odd_infinite.contains(&dir) {
                    ray_dirs.insert(dir);
                }
            }
        }
    } else {
        for &j in &even_infinite {
            let cw = Direction::from_letter(Letter::new((j + 7) % 8).unwrap()).unwrap();
            let ccw = Direction::from_letter(Letter::new((j + 1) % 8).unwrap()).unwrap();
            quads.insert(DiagonalDirection::between(cw, ccw).unwrap());
            ray_dirs.insert(cw);
            ray_dirs.insert(ccw);
        }
    }

    for quad in quads {
        families.push(BoundaryFamily::beta(quad));
    }
    for dir in ray_dirs {
        let side = index_side(&profile, dir);
        families.push(BoundaryFamily::xi(dir, side));
        families.push(BoundaryFamily::eta(dir, side));
    }
    families.sort_by_key(family_sort_key);
    (profile, families)
}

fn insufficient(name: &str, err: &BoundaryError) -> EvidenceCheck {
    EvidenceCheck {
        name: name.into(),
        levels: Vec::new(),
        status: CheckStatus::Insufficient,
        detail: err.to_string(),
    }
}

fn graded(name: &str, levels: Vec<u32>, pass: bool, detail: String) -> EvidenceCheck {
    EvidenceCheck {
        name: name.into(),
        levels,
        status: if pass {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        detail,
    }
}

/// Builds the full catalog with numeric evidence for one word.
pub fn catalog(w: &WordSpec, opts: &CatalogOptions) -> Result<BoundaryCatalog, BoundaryError> {
    let (profile, families) = classify_families(w);
    let mut evidence = Vec::new();

    if !opts.skip_evidence {
        let g = build_level_with_cap(w, opts.max_level, opts.level_cap)?;
        let mut cache = DistCache::new(&g);
        let root = g.root_abs();

        for family in &families {
            let mut checks = Vec::new();
            match (family.label, family.direction, family.quadrant) {
                (FamilyLabel::Zeta, Some(dir), _) => {
                    match antipodal_sequence(w, dir, opts.max_level) {
                        Err(err) => checks.push(insufficient("antipodal-equal-detours", &err)),
                        Ok(z) => {
                            let levels = z.levels();
                            let mut pass = true;
                            let mut detail =
                                "both corner detours equal the geodesic distance".to_string();
                            for &m in &levels {
                                let target = g.to_absolute(z.point(m).unwrap());
                                let (cb, cc) = hole_far_corners(w, dir, m);
                                let d = distance(&g, &mut cache, root, target)?;
                                let via_b = constrained_distance(
                                    &g,
                                    &mut cache,
                                    root,
                                    target,
                                    g.to_absolute(cb),
                                )?;
                                let via_c = constrained_distance(
                                    &g,
                                    &mut cache,
                                    root,
                                    target,
                                    g.to_absolute(cc),
                                )?;
                                if via_b != d || via_c != d {
                                    pass = false;
                                    detail = format!(
                                        "step {m}: detours {via_b}/{via_c} vs distance {d}"
                                    );
                                    break;
                                }
                            }
                            checks.push(graded(
                                "antipodal-equal-detours",
                                levels.clone(),
                                pass,
                                detail,
                            ));

                            let pair = nonbusemann_witness(
                                &g,
                                &mut cache,
                                &z,
                                opts.probe_radius,
                                opts.window,
                            )?;
                            checks.push(graded(
                                "disjoint-geodesic-witness",
                                levels[levels.len().saturating_sub(opts.window)..].to_vec(),
                                pair.is_some(),
                                match pair {
                                    Some((u, v)) => format!("pair {u} / {v}"),
                                    None => "no pair within radius".into(),
                                },
                            ));

                            match corner_and_fg_sequences(w, dir, opts.max_level) {
                                Err(err) => {
                                    checks.push(insufficient("separated-from-corner-point", &err))
                                }
                                Ok((_, c_seq, _, _)) => {
                                    match distinguish(
                                        &g,
                                        &mut cache,
                                        &z,
                                        &c_seq,
                                        opts.probe_radius,
                                        opts.window,
                                    ) {
                                        Err(err) => checks.push(insufficient(
                                            "separated-from-corner-point",
                                            &err,
                                        )),
                                        Ok(sep) => checks.push(graded(
                                            "separated-from-corner-point",
                                            z.common_levels(&c_seq),
                                            matches!(sep, Distinction::Distinct { .. }),
                                            format!("{sep:?}"),
                                        )),
                                    }
                                }
                            }
                            match shifted_antipodal(w, dir, 1, opts.max_level) {
                                Err(err) => {
                                    checks.push(insufficient("separated-from-unit-shift", &err))
                                }
                                Ok(zk) => {
                                    match distinguish(
                                        &g,
                                        &mut cache,
                                        &z,
                                        &zk,
                                        opts.probe_radius,
                                        opts.window,
                                    ) {
                                        Err(err) => checks
                                            .push(insufficient("separated-from-unit-shift", &err)),
                                        Ok(sep) => checks.push(graded(
                                            "separated-from-unit-shift",
                                            z.common_levels(&zk),
                                            matches!(sep, Distinction::Distinct { .. }),
                                            format!("{sep:?}"),
                                        )),
                                    }
                                }
                            }
                        }
                    }
                }
                (FamilyLabel::Beta, _, Some(quad)) => {
                    match diagonal_sequence(w, quad, opts.max_level) {
                        Err(err) => checks.push(insufficient("quadrant-value-stabilization", &err)),
                        Ok(seq) => {
                            let (sx, sy) = quad.signs();
                            // the linear form holds once the point dominates
                            // the probe ball in both coordinates
                            let levels: Vec<u32> = seq
                                .levels()
                                .into_iter()
                                .filter(|&m| {
                                    let p = seq.point(m).unwrap();
                                    p.x.abs() > opts.probe_radius as i64
                                        && p.y.abs() > opts.probe_radius as i64
                                })
                                .collect();
                            if levels.is_empty() {
                                checks.push(insufficient(
                                    "quadrant-value-stabilization",
                                    &BoundaryError::NoValidLevels(opts.max_level),
                                ));
                                evidence.push(FamilyEvidence {
                                    family: family.tag(),
                                    checks,
                                });
                                continue;
                            }
                            let tail = levels[levels.len().saturating_sub(opts.window)..].to_vec();
                            let mut pass = true;
                            let mut detail =
                                "value d(p,root)-d(p,v) stabilizes to the quadrant form of v"
                                    .to_string();
                            'outer: for &probe in &ball(&g, &mut cache, root, opts.probe_radius)? {
                                let rel = g.to_relative(probe);
                                let expected = sx * rel.x + sy * rel.y;
                                for &m in &tail {
                                    let p = g.to_absolute(seq.point(m).unwrap());
                                    let got = phi(&g, &mut cache, root, probe, p)?;
                                    if got != expected {
                                        pass = false;
                                        detail =
                                            format!("probe {rel} step {m}: {got} vs {expected}");
                                        break 'outer;
                                    }
                                }
                            }
                            checks.push(graded("quadrant-value-stabilization", tail, pass, detail));
                        }
                    }
                }
                (FamilyLabel::Xi, Some(dir), _) => {
                    match axis_ray_families(w, dir, opts.max_level, opts.k_bound) {
                        Err(err) => checks.push(insufficient("contained-rays", &err)),
                        Ok(report) => checks.push(graded(
                            "contained-rays",
                            vec![opts.max_level],
                            !report.busemann_ks.is_empty(),
                            format!(
                                "offsets {:?} hole-free up to the built boundary (level-limited)",
                                report.busemann_ks
                            ),
                        )),
                    }
                }
                (FamilyLabel::Eta, Some(dir), _) => {
                    match axis_ray_families(w, dir, opts.max_level, opts.k_bound) {
                        Err(err) => checks.push(insufficient("recurring-bounded-holes", &err)),
                        Ok(report) => {
                            let sample: Vec<(i64, u32, usize)> = report
                                .nonbusemann_ks
                                .iter()
                                .map(|t| {
                                    (t.offset, t.max_hole_level.unwrap_or(0), t.crossings.len())
                                })
                                .collect();
                            checks.push(graded(
                                "recurring-bounded-holes",
                                vec![opts.max_level],
                                !sample.is_empty(),
                                format!("(offset, max hole level, crossings): {sample:?}"),
                            ));
                        }
                    }
                }
                _ => {}
            }
            evidence.push(FamilyEvidence {
                family: family.tag(),
                checks,
            });
        }
    }

    Ok(BoundaryCatalog {
        word: w.clone(),
        profile,
        families,
        evidence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> WordSpec {
        WordSpec::parse(s).unwrap()
    }

    fn tags(word: &str) -> Vec<String> {
        let (_, families) = classify_families(&w(word));
        families.iter().map(BoundaryFamily::tag).collect()
    }

    #[test]
    fn catalog_for_single_obstruction() {
        assert_eq!(
            tags("b(7)*"),
            vec![
                "zeta(d7)",
                "beta(d57)",
                "beta(d71)",
                "xi(d1)",
                "eta(d1)",
                "xi(d5)",
                "eta(d5)"
            ]
        );
        let (_, families) = classify_families(&w("b(7)*"));
        for f in &families {
            match f.label {
                FamilyLabel::Zeta => assert_eq!(f.index_set, IndexSet::AllOfZ),
                FamilyLabel::Beta => assert_eq!(f.index_set, IndexSet::Singleton),
                FamilyLabel::Xi | FamilyLabel::Eta => {
                    assert!(matches!(f.index_set, IndexSet::InfiniteSubsetOfZ { .. }))
                }
            }
        }
        // north rays extend only toward the east flank, south rays likewise
        let north = families
            .iter()
            .find(|f| f.label == FamilyLabel::Xi && f.direction == Some(Direction::North))
            .unwrap();
        assert_eq!(
            north.index_set,
            IndexSet::InfiniteSubsetOfZ {
                side: IndexSide::Left
            }
        );
        let south = families
            .iter()
            .find(|f| f.label == FamilyLabel::Xi && f.direction == Some(Direction::South))
            .unwrap();
        assert_eq!(
            south.index_set,
            IndexSet::InfiniteSubsetOfZ {
                side: IndexSide::Right
            }
        );
    }

    #[test]
    fn catalog_for_all_digits() {
        assert_eq!(
            tags("a(01234567)*"),
            vec![
                "zeta(d1)",
                "zeta(d3)",
                "zeta(d5)",
                "zeta(d7)",
                "beta(d13)",
                "beta(d35)",
                "beta(d57)",
                "beta(d71)"
            ]
        );
    }

    #[test]
    fn catalog_without_obstruction() {
        assert_eq!(
            tags("a(02)*"),
            vec![
                "beta(d13)",
                "beta(d71)",
                "xi(d1)",
                "eta(d1)",
                "xi(d3)",
                "eta(d3)",
                "xi(d7)",
                "eta(d7)"
            ]
        );
    }

    #[test]
    fn mixed_case_covers_even_neighbors() {
        // infinite odd 7 and infinite even 2: rays at the flanks of the
        // obstruction and at the odd neighbors of 2
        assert_eq!(
            tags("a(27)*"),
            vec![
                "zeta(d7)",
                "beta(d57)",
                "beta(d71)",
                "xi(d1)",
                "eta(d1)",
                "xi(d3)",
                "eta(d3)",
                "xi(d5)",
                "eta(d5)"
            ]
        );
    }

    #[test]
    fn every_catalog_has_a_non_busemann_family() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let word = WordSpec::sample(&mut rng, 4, 4);
            let (_, families) = classify_families(&word);
            assert!(
                families.iter().any(|f| f.kind == Kind::NonBusemann),
                "word {word}"
            );
            let quads: Vec<_> = families.iter().filter_map(|f| f.quadrant).collect();
            let unique: BTreeSet<_> = quads.iter().copied().collect();
            assert_eq!(quads.len(), unique.len(), "duplicate quadrant family");
        }
    }

    #[test]
    fn reflected_catalogs_match_isomorphic_words() {
        // the digit reflection (04)(13)(57) maps the b7 word onto b5; its
        // geometric action swaps north/west and south/east and flips
        // orientation, so index sides swap too
        let (_, b7) = classify_families(&w("b(7)*"));
        let (_, b5) = classify_families(&w("b(5)*"));
        let refl_dir = |d: Direction| match d {
            Direction::East => Direction::South,
            Direction::South => Direction::East,
            Direction::North => Direction::West,
            Direction::West => Direction::North,
        };
        let mut reflected: Vec<BoundaryFamily> = b7
            .iter()
            .map(|f| {
                let mut f2 = f.clone();
                f2.direction = f.direction.map(refl_dir);
                f2.quadrant = f.quadrant.map(|q| {
                    DiagonalDirection::between(refl_dir(q.first()), refl_dir(q.second())).unwrap()
                });
                f2.index_set = match f.index_set {
                    IndexSet::InfiniteSubsetOfZ {
                        side: IndexSide::Left,
                    } => IndexSet::InfiniteSubsetOfZ {
                        side: IndexSide::Right,
                    },
                    IndexSet::InfiniteSubsetOfZ {
                        side: IndexSide::Right,
                    } => IndexSet::InfiniteSubsetOfZ {
                        side: IndexSide::Left,
                    },
                    other => other,
                };
                f2
            })
            .collect();
        reflected.sort_by_key(family_sort_key);
        assert_eq!(reflected, b5);
    }

    #[test]
    fn rotated_catalogs_for_same_shape_words() {
        // non-isomorphic graphs, isomorphic boundaries one quadrant apart
        let opts = CatalogOptions {
            skip_evidence: true,
            ..CatalogOptions::default()
        };
        let a02 = catalog(&w("a(02)*"), &opts).unwrap();
        let a24 = catalog(&w("a(24)*"), &opts).unwrap();
        assert!(!crate::word::are_isomorphic(&w("a(02)*"), &w("a(24)*")).isomorphic);
        assert_eq!(a02.rotated_families(1), a24.families);
    }

    #[test]
    fn evidence_is_attached_and_passes() {
        let cat = catalog(&w("b(7)*"), &CatalogOptions::default()).unwrap();
        assert_eq!(cat.families.len(), 7);
        assert_eq!(cat.evidence.len(), 7);
        for ev in &cat.evidence {
            assert!(!ev.checks.is_empty(), "{} has no checks", ev.family);
            for check in &ev.checks {
                assert_eq!(
                    check.status,
                    CheckStatus::Pass,
                    "{}: {} — {}",
                    ev.family,
                    check.name,
                    check.detail
                );
            }
        }
        let json = serde_json::to_value(&cat).unwrap();
        assert_eq!(json["word"], "b(7)*");
        assert!(json["profile"]["growth"].is_object());
        assert_eq!(json["families"].as_array().unwrap().len(), 7);
        assert_eq!(json["families"][0]["label"], "zeta");
        assert_eq!(json["families"][0]["direction"], "d7");
        assert_eq!(json["families"][0]["kind"], "non-busemann");
        assert_eq!(json["families"][0]["index_set"]["kind"], "all-of-z");
    }
}
