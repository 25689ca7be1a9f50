//! Searches for the orbifold pencil homs of the extended Ceva arrangements and
//! writes them as fixture files.
//!
//! Usage: cargo run -p charvar --example pencil_search -- <output-dir>

use std::collections::BTreeMap;

use charvar::orbifold::{
    orbifold_group, search_pencil_hom, MeridianRole, Orbicurve, PencilEntry, PencilFile, PencilSource,
};
use charvar::{Character, Result};

use MeridianRole::{Labeled, Off, Puncture};

const MU1: MeridianRole = Labeled { point: 0, mult: 1 };
const MU2: MeridianRole = Labeled { point: 1, mult: 1 };
const TAU: MeridianRole = Puncture { mult: 1 };

struct Spec {
    lines: &'static str,
    chi: &'static [i64],
    comment: &'static [&'static str],
    pencils: Vec<(&'static str, Vec<MeridianRole>)>,
}

fn specs() -> Vec<Spec> {
    vec![
        Spec {
            lines: "c7",
            chi: &[1, -1, -1, 1, -1, -1, 1],
            comment: &[
                "psi7_1 = f_C: lines 2,5 over [1:0], lines 3,6 over [1:1], lines 1,4 over the puncture.",
                "psi7_2 = f_SC: as psi7_1, with line 7 a double component of the fiber over the puncture.",
            ],
            pencils: vec![
                ("psi7_1", vec![TAU, MU1, MU2, TAU, MU1, MU2, Off]),
                ("psi7_2", vec![TAU, MU1, MU2, TAU, MU1, MU2, Puncture { mult: 2 }]),
            ],
        },
        Spec {
            lines: "c8",
            chi: &[1, -1, -1, 1, -1, -1, 1, 1],
            comment: &[
                "psi8_2 = f_C restricted to the complement of C8; lines 7 and 8 lie in no special fiber.",
                "psi8_3 = f_SC: line 8 is a double component over the label-2 point, so its meridian maps to mu1^2 = 1.",
            ],
            pencils: vec![
                ("psi8_2", vec![TAU, MU1, MU2, TAU, MU1, MU2, Off, Off]),
                (
                    "psi8_3",
                    vec![TAU, MU1, MU2, TAU, MU1, MU2, Puncture { mult: 2 }, Labeled { point: 0, mult: 2 }],
                ),
            ],
        },
        Spec {
            lines: "c9",
            chi: &[-1, -1, 1, -1, -1, 1, 1, 1, 1],
            comment: &[
                "psi9_2 = f_C with lines 1,4 over [0:1], lines 2,5 over [1:0], lines 3,6 over the puncture.",
                "psi9_3 = f_SC: lines 7 and 8 are double components over the labeled points, line 9 over the puncture.",
            ],
            pencils: vec![
                ("psi9_2", vec![MU1, MU2, TAU, MU1, MU2, TAU, Off, Off, Off]),
                (
                    "psi9_3",
                    vec![
                        MU1,
                        MU2,
                        TAU,
                        MU1,
                        MU2,
                        TAU,
                        Labeled { point: 0, mult: 2 },
                        Labeled { point: 1, mult: 2 },
                        Puncture { mult: 2 },
                    ],
                ),
            ],
        },
    ]
}

fn main() -> Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "fixtures".into());
    let target = Orbicurve::c_mm(2);
    let tg = orbifold_group(&target);
    for spec in specs() {
        let src = PencilSource::Arrangement { lines: spec.lines.into() };
        let group = charvar::orbifold::source_group(&src)?;
        let mut pencils = Vec::new();
        for (name, roles) in spec.pencils {
            let images = search_pencil_hom(&group, &target, &roles, 3)?
                .unwrap_or_else(|| panic!("no hom found for {name}"));
            let map: BTreeMap<String, String> = images
                .iter()
                .enumerate()
                .filter(|(_, w)| !w.is_identity())
                .map(|(i, w)| (group.names()[i].clone(), w.render(tg.names())))
                .collect();
            println!("{name}: {map:?}");
            pencils.push(PencilEntry { name: name.into(), images: Some(map), roles: Some(roles), equivariant: None });
        }
        let file = PencilFile {
            comment: spec.comment.iter().map(|s| s.to_string()).collect(),
            source: src,
            target: target.clone(),
            rho: Character::from_signs(&[-1, -1])?,
            chi: Character::from_signs(spec.chi)?,
            pencils,
            homology: None,
        };
        let text = serde_json::to_string_pretty(&file).expect("fixture serializes");
        std::fs::write(format!("{out}/{}_pencils.json", spec.lines), text + "\n").expect("write fixture");
    }
    Ok(())
}
