//! The four subcommands: frenet, partner, verify, theorems.

use crate::specfile::{CurveSpecFile, PairManifest};
use crate::{CmdError, Stage};
use dl3::curve::integrate::InvariantFn;
use dl3::curve::{format_g17, linspace, Curve, CurveSpec};
use dl3::expr::parse;
use dl3::mannheim::{partner_from_invariants, theorem_report, ReportConfig, ReportLevel};
use dl3::{DualScalar, Error};
use std::fs;
use std::path::{Path, PathBuf};

type CmdResult<T> = Result<T, CmdError>;

fn io_err(context: String) -> impl FnOnce(std::io::Error) -> CmdError {
    move |e| CmdError::new(Stage::Io, Error::Io(format!("{context}: {e}")))
}

/// All file writes go through a temp file in the same directory plus rename.
pub fn atomic_write(path: &Path, content: &str) -> CmdResult<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, content).map_err(io_err(format!("writing {}", tmp.display())))?;
    fs::rename(&tmp, path).map_err(io_err(format!("renaming to {}", path.display())))?;
    Ok(())
}

fn read_spec_file(path: &Path) -> CmdResult<CurveSpecFile> {
    let content =
        fs::read_to_string(path).map_err(io_err(format!("reading spec {}", path.display())))?;
    serde_json::from_str(&content).map_err(|e| {
        CmdError::new(
            Stage::Parse,
            Error::Parse {
                offset: 0,
                message: format!("spec {}: {e}", path.display()),
            },
        )
    })
}

fn realize(spec: &CurveSpec) -> CmdResult<Curve> {
    Curve::realize(spec).map_err(|e| CmdError::new(Stage::Compute, e))
}

const FRENET_HEADER: &str = "t,s_re,s_du,px_re,py_re,pz_re,px_du,py_du,pz_du,\
tx_re,ty_re,tz_re,tx_du,ty_du,tz_du,nx_re,ny_re,nz_re,nx_du,ny_du,nz_du,\
bx_re,by_re,bz_re,bx_du,by_du,bz_du,kappa_re,kappa_du,tau_re,tau_du";

pub fn cmd_frenet(spec_path: &Path, out: &Path, samples: Option<usize>) -> CmdResult<i32> {
    let file = read_spec_file(spec_path)?;
    let base = spec_path.parent().unwrap_or(Path::new("."));
    let spec = file
        .to_curve_spec(base)
        .map_err(|e| CmdError::new(Stage::Validate, e))?;
    let curve = realize(&spec)?;
    let grid = match samples {
        Some(n) if n >= 2 => linspace(spec.range.0, spec.range.1, n),
        Some(n) => {
            return Err(CmdError::new(
                Stage::Validate,
                Error::Input(format!("--samples {n} too small (need at least 2)")),
            ))
        }
        None => curve.grid(),
    };
    let frames = curve
        .sample_frames(&grid)
        .map_err(|e| CmdError::new(Stage::Compute, e))?;

    let mut csv = String::with_capacity(frames.len() * 700);
    csv.push_str(FRENET_HEADER);
    csv.push('\n');
    for (t, f) in grid.iter().zip(&frames) {
        let mut fields: Vec<String> = Vec::with_capacity(31);
        fields.push(format_g17(*t));
        fields.push(format_g17(f.s.re));
        fields.push(format_g17(f.s.du));
        for v in [f.position, f.tangent, f.normal, f.binormal] {
            for x in [v.re.x1, v.re.x2, v.re.x3, v.du.x1, v.du.x2, v.du.x3] {
                fields.push(format_g17(x));
            }
        }
        for x in [f.kappa.re, f.kappa.du, f.tau.re, f.tau.du] {
            fields.push(format_g17(x));
        }
        csv.push_str(&fields.join(","));
        csv.push('\n');
    }
    atomic_write(out, &csv)?;
    println!(
        "frenet: wrote {} samples over [{}, {}] to {}",
        grid.len(),
        spec.range.0,
        spec.range.1,
        out.display()
    );
    Ok(0)
}

pub fn cmd_partner(spec_path: &Path, out_dir: &Path) -> CmdResult<i32> {
    let file = read_spec_file(spec_path)?;
    if file.source != "invariants" {
        return Err(CmdError::new(
            Stage::Validate,
            Error::Input(format!(
                "partner needs an invariants-source spec, got \"{}\"",
                file.source
            )),
        ));
    }
    if file.p.is_some() {
        return Err(CmdError::new(
            Stage::Validate,
            Error::Input(
                "partner derives the curvature from the pair condition; remove field `P`".into(),
            ),
        ));
    }
    let q_text = file.q.as_deref().ok_or_else(|| {
        CmdError::new(
            Stage::Validate,
            Error::Input("partner requires torsion profile field `Q`".into()),
        )
    })?;
    let lambda: DualScalar = file
        .lambda
        .ok_or_else(|| {
            CmdError::new(
                Stage::Validate,
                Error::Input("partner requires field `lambda`".into()),
            )
        })?
        .into();
    if file.samples < 8 {
        return Err(CmdError::new(
            Stage::Validate,
            Error::Input(format!("sample count {} below minimum 8", file.samples)),
        ));
    }
    let q_expr = parse(q_text).map_err(|e| CmdError::new(Stage::Parse, e))?;
    let q_fn = InvariantFn::from_expr(q_expr, q_text.to_string());
    let steps = file.samples - 1;
    let range = (file.range[0], file.range[1]);

    let pair = partner_from_invariants(&q_fn, lambda, range, steps)
        .map_err(|e| CmdError::new(Stage::Compute, e))?;

    fs::create_dir_all(out_dir).map_err(io_err(format!("creating {}", out_dir.display())))?;
    let beta_csv = pair
        .beta
        .table()
        .expect("synth curve is table-backed")
        .to_csv();
    let alpha_csv = pair
        .alpha
        .table()
        .expect("synth curve is table-backed")
        .to_csv();
    atomic_write(&out_dir.join("beta.csv"), &beta_csv)?;
    atomic_write(&out_dir.join("alpha.csv"), &alpha_csv)?;
    let manifest = PairManifest {
        lambda: lambda.into(),
        range: [range.0, range.1],
        steps,
        branch: "negative-root".to_string(),
    };
    let mut manifest_json =
        serde_json::to_string_pretty(&manifest).expect("manifest serialization");
    manifest_json.push('\n');
    atomic_write(&out_dir.join("pair.json"), &manifest_json)?;
    println!(
        "partner: wrote alpha.csv, beta.csv, pair.json ({} rows) to {}",
        pair.ts.len(),
        out_dir.display()
    );
    Ok(0)
}

fn load_pair(dir: &Path) -> CmdResult<(Curve, Curve, Vec<f64>, PairManifest)> {
    let manifest_text = fs::read_to_string(dir.join("pair.json")).map_err(io_err(format!(
        "reading {}",
        dir.join("pair.json").display()
    )))?;
    let manifest: PairManifest = serde_json::from_str(&manifest_text).map_err(|e| {
        CmdError::new(
            Stage::Parse,
            Error::Parse {
                offset: 0,
                message: format!("pair.json: {e}"),
            },
        )
    })?;
    let read_table = |name: &str| -> CmdResult<Curve> {
        let content = fs::read_to_string(dir.join(name))
            .map_err(io_err(format!("reading {}", dir.join(name).display())))?;
        let table = dl3::curve::SampledTable::from_csv(&content)
            .map_err(|e| CmdError::new(Stage::Validate, e))?;
        let spec = CurveSpec {
            range: table.range(),
            samples: table.len(),
            source: dl3::curve::CurveSource::Table(table),
        };
        realize(&spec)
    };
    let alpha = read_table("alpha.csv")?;
    let beta = read_table("beta.csv")?;
    let ts = beta.grid();
    let alpha_ts = alpha.grid();
    if alpha_ts.len() != ts.len()
        || alpha_ts
            .iter()
            .zip(&ts)
            .any(|(a, b)| (a - b).abs() > 1e-12 * b.abs().max(1.0))
    {
        return Err(CmdError::new(
            Stage::Validate,
            Error::Input("alpha.csv and beta.csv grids do not correspond row-for-row".into()),
        ));
    }
    Ok((alpha, beta, ts, manifest))
}

pub fn cmd_report(
    dir: &Path,
    tol: f64,
    report_path: Option<PathBuf>,
    level: ReportLevel,
) -> CmdResult<i32> {
    let (alpha, beta, ts, manifest) = load_pair(dir)?;
    let cfg = ReportConfig {
        lambda: manifest.lambda.into(),
        tol,
        level,
        steps: Some(manifest.steps),
        branch: Some(manifest.branch.clone()),
    };
    let report =
        theorem_report(&alpha, &beta, &ts, &cfg).map_err(|e| CmdError::new(Stage::Compute, e))?;
    let default_name = match level {
        ReportLevel::Verify => "report.json",
        ReportLevel::Theorems => "theorems.json",
    };
    let path = report_path.unwrap_or_else(|| dir.join(default_name));
    atomic_write(&path, &report.to_json())?;

    let worst = report
        .identities
        .iter()
        .map(|i| i.max_residual_re.max(i.max_residual_du))
        .fold(0.0f64, f64::max);
    if report.verdicts.is_pair {
        println!(
            "pair verified: collinearity {:.3e}, distance spread {:.3e}, worst identity residual {:.3e}; report at {}",
            report.verdicts.collinearity_max_abs,
            report
                .verdicts
                .distance_spread_re
                .max(report.verdicts.distance_spread_du),
            worst,
            path.display()
        );
        Ok(0)
    } else {
        println!(
            "pair verification FAILED at tol {:.3e}: collinearity deviation {:.3e}, distance spread {:.3e}; report at {}",
            tol,
            report.verdicts.collinearity_max_abs,
            report
                .verdicts
                .distance_spread_re
                .max(report.verdicts.distance_spread_du),
            path.display()
        );
        Ok(3)
    }
}
