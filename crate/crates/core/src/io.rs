//! JSON forms of barcodes, modules, distances, certificates and reports.
//!
//! Every scalar is a string: `"p/q"` in lowest terms, `"-inf"` or `"inf"`.
//! Documents carry the schema version `"cpv": 1`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::distance::{CellMap, InterleavingCertificate, Matching, Partner};
use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;
use crate::invariants::LipschitzReport;
use crate::persistence::{Bar, Barcode, GradedDim, Parity, SampledModule, Spectrum};
use crate::scalar::{format_rational, parse_rational, Rational, Scalar};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct SpectrumDoc {
    points: Vec<String>,
    horizon: [String; 2],
}

#[derive(Serialize, Deserialize)]
struct BarDoc {
    birth: String,
    death: String,
    parity: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    truncated: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct BarcodeDoc {
    cpv: u32,
    spectrum: SpectrumDoc,
    bars: Vec<BarDoc>,
}

#[derive(Serialize, Deserialize)]
struct ModuleDoc {
    cpv: u32,
    spectrum: SpectrumDoc,
    samples: Vec<String>,
    dims: Vec<[usize; 2]>,
    maps: Vec<[Vec<Vec<u8>>; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PartnerDoc {
    Bar(usize),
    Ersatz { ersatz: String },
}

#[derive(Serialize, Deserialize)]
struct PairDoc {
    left: PartnerDoc,
    right: PartnerDoc,
    cost: String,
}

#[derive(Serialize, Deserialize)]
struct DistanceDoc {
    delta: String,
    matching: Vec<PairDoc>,
}

#[derive(Serialize, Deserialize)]
struct CellMapDoc {
    at: String,
    matrix: Vec<Vec<u8>>,
    cols: usize,
}

#[derive(Serialize, Deserialize)]
struct CertificateDoc {
    cpv: u32,
    delta: String,
    graded: bool,
    forward: Vec<Vec<CellMapDoc>>,
    backward: Vec<Vec<CellMapDoc>>,
}

#[derive(Serialize, Deserialize)]
struct ReportDoc {
    invariant: String,
    trials: usize,
    max_deviation: String,
    violations: Vec<String>,
}

fn pretty<T: Serialize>(doc: &T) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("documents serialize");
    text.push('\n');
    text
}

fn parse_doc<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn check_version(v: u32) -> Result<()> {
    if v == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(Error::Parse(format!(
            "unsupported schema version {v}, expected {SCHEMA_VERSION}"
        )))
    }
}

fn scalar(text: &str) -> Result<Scalar> {
    text.parse()
}

fn rational(text: &str) -> Result<Rational> {
    parse_rational(text)
}

fn rationals(texts: &[String]) -> Result<Vec<Rational>> {
    texts.iter().map(|t| rational(t)).collect()
}

fn parity(bit: u8) -> Result<Parity> {
    match bit {
        0 => Ok(Parity::Even),
        1 => Ok(Parity::Odd),
        other => Err(Error::Parse(format!("parity must be 0 or 1, got {other}"))),
    }
}

fn spectrum_doc(s: &Spectrum) -> SpectrumDoc {
    SpectrumDoc {
        points: s.points().iter().map(format_rational).collect(),
        horizon: [format_rational(s.lo()), format_rational(s.hi())],
    }
}

fn spectrum_from(doc: &SpectrumDoc) -> Result<Spectrum> {
    Spectrum::new(
        rationals(&doc.points)?,
        rational(&doc.horizon[0])?,
        rational(&doc.horizon[1])?,
    )
}

fn matrix_from(rows: &[Vec<u8>], shape: (usize, usize), what: &str) -> Result<Gf2Matrix> {
    let bad = |why: String| Error::Parse(format!("{what}: {why}"));
    if rows.len() != shape.0 {
        return Err(bad(format!("{} rows, expected {}", rows.len(), shape.0)));
    }
    if let Some(row) = rows.iter().find(|r| r.len() != shape.1) {
        return Err(bad(format!(
            "row of length {}, expected {}",
            row.len(),
            shape.1
        )));
    }
    Gf2Matrix::from_rows(rows, shape.1).ok_or_else(|| bad("entries must be 0 or 1".into()))
}

pub fn barcode_to_json(b: &Barcode) -> String {
    let bars = b
        .bars()
        .iter()
        .map(|bar| BarDoc {
            birth: bar.birth.to_string(),
            death: bar.death.to_string(),
            parity: bar.parity.index() as u8,
            truncated: bar.truncated_at.as_ref().map(format_rational),
        })
        .collect();
    pretty(&BarcodeDoc {
        cpv: SCHEMA_VERSION,
        spectrum: spectrum_doc(b.spectrum()),
        bars,
    })
}

pub fn barcode_from_json(text: &str) -> Result<Barcode> {
    let doc: BarcodeDoc = parse_doc(text)?;
    check_version(doc.cpv)?;
    let bars = doc
        .bars
        .iter()
        .map(|b| {
            Ok(Bar {
                birth: scalar(&b.birth)?,
                death: scalar(&b.death)?,
                parity: parity(b.parity)?,
                truncated_at: b.truncated.as_deref().map(rational).transpose()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Barcode::new(spectrum_from(&doc.spectrum)?, bars)
}

pub fn module_to_json(m: &SampledModule) -> String {
    pretty(&ModuleDoc {
        cpv: SCHEMA_VERSION,
        spectrum: spectrum_doc(m.spectrum()),
        samples: m.samples().iter().map(format_rational).collect(),
        dims: m.dims().to_vec(),
        maps: m
            .maps()
            .iter()
            .map(|[e, o]| [e.to_rows(), o.to_rows()])
            .collect(),
    })
}

/// Matrix shapes are taken from `dims`; a map list that does not fit them is
/// a parse error. The module itself is not validated.
pub fn module_from_json(text: &str) -> Result<SampledModule> {
    let doc: ModuleDoc = parse_doc(text)?;
    check_version(doc.cpv)?;
    let dims: Vec<GradedDim> = doc.dims.clone();
    if doc.maps.len() + 1 != dims.len().max(1) || dims.len() != doc.samples.len() {
        return Err(Error::Parse(format!(
            "{} samples, {} dimension pairs and {} maps do not fit together",
            doc.samples.len(),
            dims.len(),
            doc.maps.len()
        )));
    }
    let maps = doc
        .maps
        .iter()
        .enumerate()
        .map(|(i, pair)| {
            let build = |p: usize| {
                matrix_from(
                    &pair[p],
                    (dims[i + 1][p], dims[i][p]),
                    &format!("map {i} parity {p}"),
                )
            };
            Ok([build(0)?, build(1)?])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SampledModule::new(
        spectrum_from(&doc.spectrum)?,
        rationals(&doc.samples)?,
        dims,
        maps,
    ))
}

fn partner_doc(p: &Partner) -> PartnerDoc {
    match p {
        Partner::Bar(i) => PartnerDoc::Bar(*i),
        Partner::Ersatz(x) => PartnerDoc::Ersatz {
            ersatz: format_rational(x),
        },
    }
}

pub fn distance_to_json(delta: &Scalar, matching: &Matching) -> String {
    let matching = matching
        .pairs
        .iter()
        .map(|p| PairDoc {
            left: partner_doc(&p.left),
            right: partner_doc(&p.right),
            cost: p.cost.to_string(),
        })
        .collect();
    pretty(&DistanceDoc {
        delta: delta.to_string(),
        matching,
    })
}

/// Parses a distance document; the matching cost is recomputed from its pairs.
pub fn distance_from_json(text: &str) -> Result<(Scalar, Matching)> {
    let doc: DistanceDoc = parse_doc(text)?;
    let partner = |p: &PartnerDoc| -> Result<Partner> {
        Ok(match p {
            PartnerDoc::Bar(i) => Partner::Bar(*i),
            PartnerDoc::Ersatz { ersatz } => Partner::Ersatz(rational(ersatz)?),
        })
    };
    let pairs = doc
        .matching
        .iter()
        .map(|p| {
            Ok(crate::distance::MatchedPair {
                left: partner(&p.left)?,
                right: partner(&p.right)?,
                cost: scalar(&p.cost)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let delta = scalar(&doc.delta)?;
    let cost = pairs
        .iter()
        .map(|p| p.cost.clone())
        .max()
        .unwrap_or_else(Scalar::zero);
    Ok((delta, Matching { pairs, cost }))
}

fn cell_docs(parts: &[Vec<CellMap>]) -> Vec<Vec<CellMapDoc>> {
    parts
        .iter()
        .map(|cells| {
            cells
                .iter()
                .map(|c| CellMapDoc {
                    at: format_rational(&c.at),
                    matrix: c.matrix.to_rows(),
                    cols: c.matrix.cols(),
                })
                .collect()
        })
        .collect()
}

fn cells_from(docs: &[Vec<CellMapDoc>]) -> Result<Vec<Vec<CellMap>>> {
    docs.iter()
        .map(|cells| {
            cells
                .iter()
                .map(|c| {
                    let shape = (c.matrix.len(), c.cols);
                    Ok(CellMap {
                        at: rational(&c.at)?,
                        matrix: matrix_from(&c.matrix, shape, "cell map")?,
                    })
                })
                .collect()
        })
        .collect()
}

pub fn certificate_to_json(c: &InterleavingCertificate) -> String {
    pretty(&CertificateDoc {
        cpv: SCHEMA_VERSION,
        delta: format_rational(&c.delta),
        graded: c.graded,
        forward: cell_docs(&c.forward),
        backward: cell_docs(&c.backward),
    })
}

pub fn certificate_from_json(text: &str) -> Result<InterleavingCertificate> {
    let doc: CertificateDoc = parse_doc(text)?;
    check_version(doc.cpv)?;
    Ok(InterleavingCertificate {
        delta: rational(&doc.delta)?,
        graded: doc.graded,
        forward: cells_from(&doc.forward)?,
        backward: cells_from(&doc.backward)?,
    })
}

pub fn report_to_json(r: &LipschitzReport) -> String {
    pretty(&ReportDoc {
        invariant: r.invariant.clone(),
        trials: r.trials,
        max_deviation: format_rational(&r.max_deviation),
        violations: r.violations.clone(),
    })
}

pub fn report_from_json(text: &str) -> Result<LipschitzReport> {
    let doc: ReportDoc = parse_doc(text)?;
    Ok(LipschitzReport {
        invariant: doc.invariant,
        trials: doc.trials,
        max_deviation: rational(&doc.max_deviation)?,
        violations: doc.violations,
    })
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_barcode(path: &Path) -> Result<Barcode> {
    barcode_from_json(&read_text(path)?)
}

pub fn read_module(path: &Path) -> Result<SampledModule> {
    module_from_json(&read_text(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::{bottleneck_distance, interleaving_search};
    use crate::persistence::module_from_barcode;
    use crate::scalar::int;

    fn sample() -> Barcode {
        let s = Spectrum::new(vec![int(0), int(1), int(3)], int(0), int(4)).unwrap();
        Barcode::new(
            s,
            vec![
                Bar::finite(int(0), int(1), Parity::Even),
                Bar::new(Scalar::NegInf, Scalar::PosInf, Parity::Odd),
                Bar::truncated(Scalar::from_int(3), int(4), Parity::Even),
            ],
        )
        .unwrap()
    }

    #[test]
    fn barcode_round_trip() {
        let b = sample();
        let text = barcode_to_json(&b);
        assert!(text.contains("\"truncated\": \"4/1\""));
        assert!(text.contains("\"death\": \"inf\""));
        assert_eq!(barcode_from_json(&text).unwrap(), b);
    }

    #[test]
    fn module_round_trip() {
        let m = module_from_barcode(&sample().promote_truncated(), 2).unwrap();
        assert_eq!(module_from_json(&module_to_json(&m)).unwrap(), m);
    }

    #[test]
    fn distance_and_certificate_round_trip() {
        let b = sample();
        let (d, matching) = bottleneck_distance(&b, &b, false);
        let (d2, m2) = distance_from_json(&distance_to_json(&d, &matching)).unwrap();
        assert_eq!((d2, m2), (d, matching));

        let m = module_from_barcode(&b.promote_truncated(), 1).unwrap();
        let cert = interleaving_search(&m, &m, true)
            .unwrap()
            .certificate
            .unwrap();
        assert_eq!(
            certificate_from_json(&certificate_to_json(&cert)).unwrap(),
            cert
        );
    }

    #[test]
    fn rejects_floats_versions_and_bad_shapes() {
        let text = barcode_to_json(&sample());
        assert!(matches!(
            barcode_from_json(&text.replace("\"1/1\"", "\"1.0\"")),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            barcode_from_json(&text.replace("\"cpv\": 1", "\"cpv\": 2")),
            Err(Error::Parse(_))
        ));
        assert!(matches!(barcode_from_json("{"), Err(Error::Parse(_))));
        let m = module_from_barcode(&sample().promote_truncated(), 1).unwrap();
        let text = module_to_json(&m).replacen(
            "[\n          1\n        ]",
            "[\n          1, 1\n        ]",
            1,
        );
        assert!(matches!(module_from_json(&text), Err(Error::Parse(_))));
    }
}
