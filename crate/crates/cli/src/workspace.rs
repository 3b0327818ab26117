//! Single-file JSON workspace: a triangulation, coordinates on it, and the
//! history of state-changing commands that produced them.

use std::fs;
use std::path::Path;

use penner_core::coords::{flip_sequence, scale_action, PunctureScaling, SignedCoords};
use penner_core::surface::{EdgeId, Triangulation};
use penner_core::{Error, Mode, Rational, Scalar, Sign};
use serde_json::{json, Value};

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Workspace<S> {
    pub tri: Triangulation,
    pub coords: SignedCoords<S>,
    pub seed: u64,
    pub history: Vec<Value>,
}

pub enum AnyWorkspace {
    Rational(Workspace<Rational>),
    Float(Workspace<f64>),
}

/// Runs `$body` with `$w` bound to the workspace in either mode.
macro_rules! dispatch {
    ($any:expr, $w:ident => $body:expr) => {
        match $any {
            $crate::workspace::AnyWorkspace::Rational($w) => $body,
            $crate::workspace::AnyWorkspace::Float($w) => $body,
        }
    };
}
pub(crate) use dispatch;

pub fn parse_signs(text: &str) -> Result<Vec<Sign>, CliError> {
    text.chars()
        .map(|ch| match ch {
            '+' => Ok(Sign::Plus),
            '-' => Ok(Sign::Minus),
            other => Err(CliError::Usage(format!("sign pattern may only contain + and -, found {other:?}"))),
        })
        .collect()
}

pub fn parse_scalars<S: Scalar>(items: &[String]) -> Result<Vec<S>, CliError> {
    items
        .iter()
        .flat_map(|s| s.split(','))
        .filter(|s| !s.trim().is_empty())
        .map(|s| S::parse_repr(s).map_err(|e| CliError::Usage(e.to_string())))
        .collect()
}

impl<S: Scalar> Workspace<S> {
    /// Canonical surface with the given (or unit) coordinates.
    pub fn new_surface(
        genus: usize,
        punctures: usize,
        lengths: Option<Vec<String>>,
        signs: Option<String>,
        seed: u64,
    ) -> Result<Self, CliError> {
        let entry = json!({
            "command": "new",
            "genus": genus,
            "punctures": punctures,
            "lengths": lengths,
            "signs": signs,
        });
        let mut ws = Workspace::empty(seed);
        ws.apply(&entry)?;
        Ok(ws)
    }

    pub fn import(tri: Triangulation, coords: SignedCoords<S>, seed: u64) -> Self {
        let entry = json!({
            "command": "import",
            "surface": tri.to_json(),
            "coords": coords.to_json(),
        });
        Workspace { tri, coords, seed, history: vec![entry] }
    }

    fn empty(seed: u64) -> Self {
        let tri = Triangulation::new_surface(1, 1).expect("torus exists");
        let coords = SignedCoords::unit(&tri);
        Workspace { tri, coords, seed, history: Vec::new() }
    }

    pub fn flip(&mut self, edges: &[EdgeId], tol: penner_core::Tolerance) -> Result<Vec<penner_core::coords::FlipStep<S>>, CliError> {
        let (tri, coords, log) = flip_sequence(&self.tri, &self.coords, edges, tol)?;
        self.tri = tri;
        self.coords = coords;
        self.history.push(json!({ "command": "flip", "edges": edges, "tolerance": tol.0 }));
        Ok(log)
    }

    pub fn scale(&mut self, h: &[String]) -> Result<(), CliError> {
        let entry = json!({ "command": "scale", "h": h });
        self.apply(&entry)
    }

    /// Applies one history entry and records it.
    fn apply(&mut self, entry: &Value) -> Result<(), CliError> {
        let bad = |what: &str| CliError::Io(format!("malformed history entry ({what}): {entry}"));
        let command = entry["command"].as_str().ok_or_else(|| bad("command"))?;
        match command {
            "new" => {
                let g = entry["genus"].as_u64().ok_or_else(|| bad("genus"))? as usize;
                let s = entry["punctures"].as_u64().ok_or_else(|| bad("punctures"))? as usize;
                let tri = Triangulation::new_surface(g, s)?;
                let mut coords = SignedCoords::unit(&tri);
                if let Some(items) = entry["lengths"].as_array() {
                    let items: Vec<String> = items.iter().filter_map(|v| v.as_str().map(String::from)).collect();
                    let f = parse_scalars(&items)?;
                    coords = SignedCoords::new(&tri, f, coords.signs().to_vec())?;
                }
                if let Some(text) = entry["signs"].as_str() {
                    coords = coords.with_signs(parse_signs(text)?)?;
                }
                self.tri = tri;
                self.coords = coords;
            }
            "import" => {
                let tri = Triangulation::from_json(entry["surface"].clone())?;
                self.coords = SignedCoords::from_json(&tri, &entry["coords"])?;
                self.tri = tri;
            }
            "flip" => {
                let edges: Vec<EdgeId> = serde_json::from_value(entry["edges"].clone()).map_err(|_| bad("edges"))?;
                let tol = penner_core::Tolerance(entry["tolerance"].as_f64().unwrap_or(1e-9));
                let (tri, coords, _) = flip_sequence(&self.tri, &self.coords, &edges, tol)?;
                self.tri = tri;
                self.coords = coords;
            }
            "scale" => {
                let items: Vec<String> = serde_json::from_value(entry["h"].clone()).map_err(|_| bad("h"))?;
                let h = PunctureScaling::new(&self.tri, parse_scalars(&items)?)?;
                self.coords = scale_action(&self.tri, &self.coords, &h);
            }
            other => return Err(bad(other)),
        }
        self.history.push(entry.clone());
        Ok(())
    }

    /// Rebuilds the state from the history alone.
    pub fn replayed(&self) -> Result<Self, CliError> {
        let mut ws = Workspace::empty(self.seed);
        for entry in &self.history {
            ws.apply(entry)?;
        }
        Ok(ws)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "mode": S::MODE,
            "seed": self.seed,
            "surface": self.tri.to_json(),
            "coords": self.coords.to_json(),
            "history": self.history,
        })
    }

    fn from_value(value: &Value) -> Result<Self, CliError> {
        let tri = Triangulation::from_json(value["surface"].clone())?;
        let coords = SignedCoords::from_json(&tri, &value["coords"])?;
        let seed = value["seed"].as_u64().unwrap_or(0);
        let history = value["history"].as_array().cloned().unwrap_or_default();
        Ok(Workspace { tri, coords, seed, history })
    }
}

impl AnyWorkspace {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let mode: Mode = serde_json::from_value(value["mode"].clone())
            .map_err(|_| CliError::Io(format!("{}: missing or unknown mode", path.display())))?;
        let parsed = match mode {
            Mode::Rational => Workspace::from_value(&value).map(AnyWorkspace::Rational),
            Mode::Float => Workspace::from_value(&value).map(AnyWorkspace::Float),
        };
        parsed.map_err(|e| match e {
            CliError::Core(Error::Parse(msg)) => CliError::Io(format!("{}: {msg}", path.display())),
            other => other,
        })
    }
}

pub fn save<S: Scalar>(ws: &Workspace<S>, path: &Path) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(&ws.to_json()).expect("workspace serializes");
    fs::write(path, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
