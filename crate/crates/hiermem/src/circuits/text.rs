// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Line-oriented circuit text.
//!
//! ```text
//! circuit width=13 depth=12
//! qubit 0 data
//! qubit 9 ancilla_x 1 0 2      (layer x y, only for placed circuits)
//! data 0 0
//! readout X 0
//! step
//! PX 9
//! CNOT 9 0
//! ```

use std::fmt::Write as _;

use super::{Circuit, CircuitError, Location, Phase, Readout, Role, Site, SinglePauli};

fn role_name(r: Role) -> &'static str {
    match r {
        Role::Data => "data",
        Role::AncillaX => "ancilla_x",
        Role::AncillaZ => "ancilla_z",
        Role::Buffer => "buffer",
    }
}

fn parse_role(s: &str) -> Option<Role> {
    Some(match s {
        "data" => Role::Data,
        "ancilla_x" => Role::AncillaX,
        "ancilla_z" => Role::AncillaZ,
        "buffer" => Role::Buffer,
        _ => return None,
    })
}

pub(super) fn to_text(c: &Circuit) -> String {
    let mut s = format!("circuit width={} depth={}\n", c.width, c.depth());
    for q in 0..c.width {
        let _ = write!(s, "qubit {q} {}", role_name(c.roles[q]));
        if let Some(p) = &c.placement {
            let _ = write!(s, " {} {} {}", p[q].layer, p[q].x, p[q].y);
        }
        s.push('\n');
    }
    for (j, q) in c.data_qubits.iter().enumerate() {
        let _ = writeln!(s, "data {j} {q}");
    }
    for r in &c.readouts {
        let ph = if r.phase == Phase::X { "X" } else { "Z" };
        let _ = writeln!(s, "readout {ph} {}", r.check);
    }
    for step in &c.steps {
        s.push_str("step\n");
        for l in step {
            let _ = match *l {
                Location::PrepPlus(q) => writeln!(s, "PX {q}"),
                Location::PrepZero(q) => writeln!(s, "PZ {q}"),
                Location::MeasX(q) => writeln!(s, "MX {q}"),
                Location::MeasZ(q) => writeln!(s, "MZ {q}"),
                Location::Cnot(a, b) => writeln!(s, "CNOT {a} {b}"),
                Location::Cz(a, b) => writeln!(s, "CZ {a} {b}"),
                Location::Swap(a, b) => writeln!(s, "SWAP {a} {b}"),
                Location::Idle(q) => writeln!(s, "I {q}"),
                Location::Pauli(q, p) => writeln!(s, "{} {q}", match p {
                    SinglePauli::X => "X",
                    SinglePauli::Y => "Y",
                    SinglePauli::Z => "Z",
                }),
            };
        }
    }
    s
}

pub(super) fn from_text(text: &str) -> Result<Circuit, CircuitError> {
    let err = |line: &str| CircuitError::Parse(format!("bad line {line:?}"));
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| CircuitError::Parse("empty input".into()))?;
    let field = |key: &str| -> Result<usize, CircuitError> {
        header
            .split_whitespace()
            .find_map(|t| t.strip_prefix(key))
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| err(header))
    };
    if !header.starts_with("circuit ") {
        return Err(err(header));
    }
    let width = field("width=")?;
    let depth = field("depth=")?;
    let mut c = Circuit::new(width);
    c.data_qubits.clear();
    let mut placement: Vec<Site> = Vec::new();
    for line in lines {
        let t: Vec<&str> = line.split_whitespace().collect();
        if t.is_empty() {
            continue;
        }
        let num = |i: usize| -> Result<usize, CircuitError> { t.get(i).and_then(|x| x.parse().ok()).ok_or_else(|| err(line)) };
        let int = |i: usize| -> Result<i64, CircuitError> { t.get(i).and_then(|x| x.parse().ok()).ok_or_else(|| err(line)) };
        match t[0] {
            "qubit" => {
                let q = num(1)?;
                if q >= width {
                    return Err(err(line));
                }
                c.roles[q] = t.get(2).and_then(|r| parse_role(r)).ok_or_else(|| err(line))?;
                if t.len() == 6 {
                    placement.push(Site { layer: num(3)? as u8, x: int(4)?, y: int(5)? });
                }
            }
            "data" => c.data_qubits.push(num(2)?),
            "readout" => {
                let phase = match t.get(1) {
                    Some(&"X") => Phase::X,
                    Some(&"Z") => Phase::Z,
                    _ => return Err(err(line)),
                };
                c.readouts.push(Readout { phase, check: num(2)? });
            }
            "step" => c.steps.push(Vec::new()),
            op => {
                let step = c.steps.last_mut().ok_or_else(|| err(line))?;
                let loc = match (op, t.len()) {
                    ("PX", 2) => Location::PrepPlus(num(1)?),
                    ("PZ", 2) => Location::PrepZero(num(1)?),
                    ("MX", 2) => Location::MeasX(num(1)?),
                    ("MZ", 2) => Location::MeasZ(num(1)?),
                    ("I", 2) => Location::Idle(num(1)?),
                    ("X", 2) => Location::Pauli(num(1)?, SinglePauli::X),
                    ("Y", 2) => Location::Pauli(num(1)?, SinglePauli::Y),
                    ("Z", 2) => Location::Pauli(num(1)?, SinglePauli::Z),
                    ("CNOT", 3) => Location::Cnot(num(1)?, num(2)?),
                    ("CZ", 3) => Location::Cz(num(1)?, num(2)?),
                    ("SWAP", 3) => Location::Swap(num(1)?, num(2)?),
                    _ => return Err(err(line)),
                };
                if loc.max_qubit() >= width {
                    return Err(err(line));
                }
                step.push(loc);
            }
        }
    }
    if c.steps.len() != depth {
        return Err(CircuitError::Parse(format!("header depth {depth}, found {} steps", c.steps.len())));
    }
    if !placement.is_empty() {
        if placement.len() != width {
            return Err(CircuitError::Parse("partial placement table".into()));
        }
        c.placement = Some(placement);
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut c = Circuit::new(3);
        c.roles[2] = Role::AncillaX;
        c.data_qubits = vec![0, 1];
        c.readouts.push(Readout { phase: Phase::X, check: 0 });
        c.push_step(vec![Location::PrepPlus(2), Location::Idle(0)]);
        c.push_step(vec![Location::Cnot(2, 0), Location::Pauli(1, SinglePauli::Y)]);
        c.push_step(vec![Location::Swap(0, 1)]);
        c.push_step(vec![Location::MeasX(2)]);
        let text = c.to_text();
        let back = Circuit::from_text(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_text(), text);
        assert!(Circuit::from_text("circuit width=1 depth=0\nstep\nCNOT 0 5\n").is_err());
    }
}
