//! File formats: JSON Lines instance files, CSV result tables, JSON reports.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::{DominanceReport, GridScanResult, ScalingReport, ScheduleProfile};
use crate::model::{Coupling, GroundStateRecord, SpinGlassInstance};
use crate::num::ScheduleScalar;

/// One line of an instance file. Ground-truth fields stay null until solved.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub id: String,
    pub n: usize,
    pub seed: u64,
    pub couplings: Vec<(usize, usize, f64)>,
    pub fields: Vec<f64>,
    pub e0: Option<f64>,
    pub z_star: Option<usize>,
    pub degeneracy: Option<usize>,
}

impl InstanceRecord {
    pub fn from_instance(inst: &SpinGlassInstance) -> Self {
        InstanceRecord {
            id: inst.id().to_string(),
            n: inst.n(),
            seed: inst.seed(),
            couplings: inst.couplings().iter().map(|c| (c.a, c.b, c.j)).collect(),
            fields: inst.fields().to_vec(),
            e0: None,
            z_star: None,
            degeneracy: None,
        }
    }

    pub fn to_instance(&self) -> Result<SpinGlassInstance> {
        let couplings = self
            .couplings
            .iter()
            .map(|&(a, b, j)| Coupling { a, b, j })
            .collect();
        SpinGlassInstance::new(self.id.clone(), self.n, self.seed, couplings, self.fields.clone())
    }

    pub fn is_solved(&self) -> bool {
        self.e0.is_some() && self.z_star.is_some() && self.degeneracy.is_some()
    }

    pub fn set_ground(&mut self, gs: &GroundStateRecord<f64>) {
        self.e0 = Some(gs.e0);
        self.z_star = Some(gs.z_star);
        self.degeneracy = Some(gs.degeneracy);
    }

    /// Fails with [`Error::Unsolved`] when no ground-state fields are present.
    pub fn require_solved(&self) -> Result<()> {
        if self.is_solved() {
            Ok(())
        } else {
            Err(Error::Unsolved(self.id.clone()))
        }
    }
}

pub fn create_file(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn finish(path: &Path, mut w: impl Write) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

/// Reads a JSON Lines instance file. Blank lines are skipped; malformed
/// lines fail with their 1-based line number.
pub fn read_instances(path: &Path) -> Result<Vec<InstanceRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (k, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: k + 1,
            message,
        };
        let rec: InstanceRecord = serde_json::from_str(&line).map_err(|e| parse_err(e.to_string()))?;
        rec.to_instance().map_err(|e| parse_err(e.to_string()))?;
        out.push(rec);
    }
    Ok(out)
}

pub fn write_instances(path: &Path, records: &[InstanceRecord]) -> Result<()> {
    let mut w = create_file(path)?;
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    finish(path, w)
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_json<V: Serialize + ?Sized>(path: &Path, value: &V) -> Result<()> {
    let mut w = create_file(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    finish(path, w)
}

/// `axis1,axis2,energy,success_prob`, row-major over the grid. Time-averaged
/// scans append `energy_se,success_prob_se`.
pub fn write_grid_csv<W: Write>(w: W, result: &GridScanResult) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    let se = result.energy_se.as_ref().zip(result.success_prob_se.as_ref());
    let mut header = vec!["axis1", "axis2", "energy", "success_prob"];
    if se.is_some() {
        header.extend(["energy_se", "success_prob_se"]);
    }
    csv.write_record(&header)?;
    for (i, &a1) in result.axis1.values.iter().enumerate() {
        for (j, &a2) in result.axis2.values.iter().enumerate() {
            let k = result.index(i, j);
            let mut row = vec![a1, a2, result.energy[k], result.success_prob[k]];
            if let Some((e, p)) = se {
                row.extend([e[k], p[k]]);
            }
            csv.serialize(row)?;
        }
    }
    csv.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// `p,err_qaoa1,err_qaoa2,err_msqw`; methods left out of the study are empty.
pub fn write_scaling_csv<W: Write>(w: W, report: &ScalingReport) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(["p", "err_qaoa1", "err_qaoa2", "err_msqw"])?;
    let cell = |e: &Option<Vec<f64>>, k: usize| e.as_ref().map(|e| e[k]);
    for (k, &p) in report.p_values.iter().enumerate() {
        csv.serialize((
            p,
            cell(&report.err_qaoa1, k),
            cell(&report.err_qaoa2, k),
            cell(&report.err_msqw, k),
        ))?;
    }
    csv.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_dominance_csv<W: Write>(w: W, report: &DominanceReport) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    for row in &report.rows {
        csv.serialize(row)?;
    }
    if report.rows.is_empty() {
        csv.write_record([
            "instance_id",
            "qw_best_energy",
            "qaoa_best_energy",
            "qw_best_prob",
            "qaoa_best_prob",
        ])?;
    }
    csv.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// `stage,alpha_over_t,beta_over_t` as nearest `f64`.
pub fn write_profile_csv<W: Write, S: ScheduleScalar>(w: W, profile: &ScheduleProfile<S>) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(["stage", "alpha_over_t", "beta_over_t"])?;
    for r in &profile.rows {
        csv.serialize((r.stage, r.alpha_over_t.approx_f64(), r.beta_over_t.approx_f64()))?;
    }
    csv.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Writes a CSV table to `path` through one of the `write_*_csv` functions.
pub fn write_csv_file<F>(path: &Path, write: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> Result<()>,
{
    let mut w = create_file(path)?;
    write(&mut w)?;
    finish(path, w)
}
