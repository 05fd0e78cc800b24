//! Planted pocket fixture for one sequence. Residues R01..R20 sit 10 Å
//! apart on the x axis, so a ligand atom placed beside residue i contacts
//! exactly residues i-1, i, i+1 (k = 3).
//!
//! Kept structures and their pockets:
//!   S1 {2..5}, S2 {2..6}, S3 {3..7}, S4 = S5 {13..16}, S6 {9..11}
//! IoU: S1-S2 0.8, S2-S3 2/3, S1-S3 0.5, S4-S5 1, every other pair 0.
//! At cutoff 0.6 single linkage chains S1-S2-S3 although S1-S3 is below
//! the cutoff. X1, X2 fail the potency filter; X3 fails the confidence
//! filter and would otherwise join the first cluster.

#![allow(dead_code)]

use molbench_datagen::pockets::{Point, Residue, StructureRecord};

pub const IOU_CUTOFF: f64 = 0.6;
pub const KEPT: [&str; 6] = ["S1", "S2", "S3", "S4", "S5", "S6"];

pub fn iou_matrix() -> [[f64; 6]; 6] {
    let mut m = [[0.0; 6]; 6];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let mut set = |i: usize, j: usize, v: f64| {
        m[i][j] = v;
        m[j][i] = v;
    };
    set(0, 1, 0.8);
    set(1, 2, 2.0 / 3.0);
    set(0, 2, 0.5);
    set(3, 4, 1.0);
    m
}

/// (members, consensus residues, representative)
pub fn expected_clusters() -> Vec<(Vec<&'static str>, Vec<&'static str>, &'static str)> {
    vec![
        (vec!["S1", "S2", "S3"], vec!["R03", "R04", "R05"], "S2"),
        (vec!["S4", "S5"], vec!["R13", "R14", "R15", "R16"], "S4"),
        (vec!["S6"], vec!["R09", "R10", "R11"], "S6"),
    ]
}

const OFFSETS: [Point; 4] = [[0.0, 0.0, 0.0], [0.5, 0.0, 0.0], [0.0, 0.7, 0.0], [0.0, 0.0, 0.9]];

fn base() -> Vec<Residue> {
    (1..=20)
        .map(|i| Residue {
            id: format!("R{i:02}"),
            atoms: OFFSETS.iter().map(|o| [10.0 * i as f64 + o[0], o[1], o[2]]).collect(),
        })
        .collect()
}

fn ligand(at: &[usize]) -> Vec<Point> {
    at.iter().map(|&i| [10.0 * i as f64 + 2.0, 0.0, 3.0]).collect()
}

fn moved(p: Point, angle: f64, shift: Point) -> Point {
    // rotation about the axis (1, 1, 1)/sqrt(3)
    let k = [1.0 / 3f64.sqrt(); 3];
    let (s, c) = angle.sin_cos();
    let dot = k[0] * p[0] + k[1] * p[1] + k[2] * p[2];
    let cross = [k[1] * p[2] - k[2] * p[1], k[2] * p[0] - k[0] * p[2], k[0] * p[1] - k[1] * p[0]];
    [0, 1, 2].map(|i| p[i] * c + cross[i] * s + k[i] * dot * (1.0 - c) + shift[i])
}

fn record(id: &str, residues: Vec<Residue>, lig: &[usize], potency: f64, confidence: f64, motion: f64) -> StructureRecord {
    let shift = [motion * 3.0, -motion, 2.0 * motion];
    StructureRecord {
        sequence_id: "P1".into(),
        structure_id: id.into(),
        residues: residues
            .into_iter()
            .map(|r| Residue { id: r.id, atoms: r.atoms.into_iter().map(|a| moved(a, motion, shift)).collect() })
            .collect(),
        ligand: ligand(lig).into_iter().map(|a| moved(a, motion, shift)).collect(),
        potency,
        confidence,
    }
}

fn displaced(residue: usize, atom: usize, by: Point) -> Vec<Residue> {
    let mut r = base();
    for k in 0..3 {
        r[residue - 1].atoms[atom][k] += by[k];
    }
    r
}

pub fn records() -> Vec<StructureRecord> {
    vec![
        record("X3", base(), &[5, 6, 7], 7.5, 0.5, 0.9),
        record("S1", displaced(4, 1, [0.0, 0.3, 0.0]), &[3, 4], 7.5, 0.9, 0.3),
        record("S2", base(), &[3, 4, 5], 7.5, 0.9, 1.1),
        record("S3", {
            let mut r = displaced(5, 2, [0.0, 0.0, 1.2]);
            r[2].atoms[0][0] += 0.8;
            r
        }, &[4, 5, 6], 7.5, 0.9, 2.0),
        record("X1", base(), &[17], 6.0, 0.9, 0.0),
        record("S4", base(), &[14, 15], 7.5, 0.9, 0.7),
        record("S5", base(), &[14, 15], 7.5, 0.9, 2.9),
        record("S6", base(), &[10], 7.5, 0.9, 1.7),
        record("X2", base(), &[18, 19], 6.0, 0.95, 0.4),
    ]
}
