//! Line-oriented text formats for instances and solutions.
//!
//! Instance:
//!
//! ```text
//! <vertices> <edges> <trips>
//! <u> <v> <len>                              one line per edge
//! <id> <s> <t> <n> <d> <δ> <α> <β> <path>    one line per trip
//! ```
//!
//! A trip with several preferred paths separates them with ` | `.
//!
//! Solution:
//!
//! ```text
//! solution <drivers>
//! driver <id> path <k> depart <t> arrive <t> serves <ids>
//! route <vertices>
//! pickup <v> <t> <ids>                       zero or more per driver
//! ```
//!
//! Blank lines and text after `#` are ignored on read. Writers emit the
//! canonical form: ascending ids, single spaces, newline-terminated lines.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::model::{Assignment, Instance, ModelError, Pickup, PickupPlan, RoadNetwork, Solution, Trip, TripId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodecError {
    #[error("parse error at line {line}, field {field}: {message}")]
    Parse {
        line: usize,
        field: &'static str,
        message: String,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
}

const TRIP_FIELDS: [&str; 8] = ["id", "source", "destination", "capacity", "detour", "stops", "earliest", "latest"];

pub fn write_instance(inst: &Instance) -> String {
    let net = inst.network();
    let mut out = String::new();
    let _ = writeln!(out, "{} {} {}", net.vertex_count(), net.edges().len(), inst.len());
    for e in net.edges() {
        let _ = writeln!(out, "{} {} {}", e.u, e.v, e.length);
    }
    for t in inst.trips() {
        let _ = write!(
            out,
            "{} {} {} {} {} {} {} {}",
            t.id, t.source, t.destination, t.capacity, t.detour_limit, t.stop_limit, t.depart_earliest, t.arrive_latest
        );
        for (k, path) in t.preferred_paths.iter().enumerate() {
            if k > 0 {
                out.push_str(" |");
            }
            for v in path {
                let _ = write!(out, " {v}");
            }
        }
        out.push('\n');
    }
    out
}

pub fn read_instance(text: &str) -> Result<Instance, CodecError> {
    let mut lines = content_lines(text);
    let (line, header) = lines.next().ok_or(CodecError::Parse {
        line: 1,
        field: "header",
        message: "missing header".into(),
    })?;
    let mut f = Fields::new(line, &header);
    let vertices: u32 = f.next("vertices")?;
    let edge_count: usize = f.next("edges")?;
    let trip_count: usize = f.next("trips")?;
    f.end()?;

    let mut edges = Vec::with_capacity(edge_count);
    for _ in 0..edge_count {
        let (line, tokens) = next_line(&mut lines, "edge")?;
        let mut f = Fields::new(line, &tokens);
        edges.push((f.next("u")?, f.next("v")?, f.next("length")?));
        f.end()?;
    }
    let network = RoadNetwork::new(vertices, edges)?;

    let mut trips = Vec::with_capacity(trip_count);
    for _ in 0..trip_count {
        let (line, tokens) = next_line(&mut lines, "trip")?;
        let mut f = Fields::new(line, &tokens);
        let [id, source, destination, capacity, detour, stops, earliest, latest] = TRIP_FIELDS;
        let id = TripId(f.next(id)?);
        let source = f.next(source)?;
        let destination = f.next(destination)?;
        let capacity = f.next(capacity)?;
        let detour_limit = f.next(detour)?;
        let stop_limit = f.next(stops)?;
        let depart_earliest = f.next(earliest)?;
        let arrive_latest = f.next(latest)?;
        let mut preferred_paths = vec![Vec::new()];
        while let Some(tok) = f.peek() {
            if tok == "|" {
                f.skip();
                preferred_paths.push(Vec::new());
            } else {
                preferred_paths.last_mut().expect("non-empty").push(f.next("path")?);
            }
        }
        if preferred_paths.iter().any(Vec::is_empty) {
            return Err(f.error("path", "empty preferred path"));
        }
        trips.push(Trip {
            id,
            source,
            destination,
            capacity,
            detour_limit,
            preferred_paths,
            stop_limit,
            depart_earliest,
            arrive_latest,
        });
    }
    if let Some((line, _)) = lines.next() {
        return Err(CodecError::Parse {
            line,
            field: "trailer",
            message: "unexpected line after the last trip".into(),
        });
    }
    Ok(Instance::new(network, trips)?)
}

pub fn write_solution(sol: &Solution) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "solution {}", sol.driver_count());
    for (driver, a) in sol.iter() {
        let plan = &a.plan;
        let _ = write!(
            out,
            "driver {driver} path {} depart {} arrive {} serves",
            plan.path_index, plan.departure, plan.arrival
        );
        for t in &a.served {
            let _ = write!(out, " {t}");
        }
        out.push_str("\nroute");
        for v in &plan.route {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
        for p in &plan.pickups {
            let _ = write!(out, "pickup {} {}", p.vertex, p.time);
            for t in &p.passengers {
                let _ = write!(out, " {t}");
            }
            out.push('\n');
        }
    }
    out
}

pub fn read_solution(text: &str) -> Result<Solution, CodecError> {
    let mut lines = content_lines(text).peekable();
    let (line, header) = lines.next().ok_or(CodecError::Parse {
        line: 1,
        field: "header",
        message: "missing header".into(),
    })?;
    let mut f = Fields::new(line, &header);
    f.keyword("solution")?;
    let count: usize = f.next("drivers")?;
    f.end()?;

    let mut sol = Solution::new();
    for _ in 0..count {
        let (line, tokens) = next_line(&mut lines, "driver")?;
        let mut f = Fields::new(line, &tokens);
        f.keyword("driver")?;
        let driver = TripId(f.next("driver")?);
        f.keyword("path")?;
        let path_index = f.next("path")?;
        f.keyword("depart")?;
        let departure = f.next("depart")?;
        f.keyword("arrive")?;
        let arrival = f.next("arrive")?;
        f.keyword("serves")?;
        let mut served = BTreeSet::new();
        while f.peek().is_some() {
            served.insert(TripId(f.next("serves")?));
        }

        let (line, tokens) = next_line(&mut lines, "route")?;
        let mut f = Fields::new(line, &tokens);
        f.keyword("route")?;
        let mut route = Vec::new();
        while f.peek().is_some() {
            route.push(f.next("route")?);
        }

        let mut pickups = Vec::new();
        while lines.peek().is_some_and(|(_, t)| t.first().is_some_and(|w| *w == "pickup")) {
            let (line, tokens) = lines.next().expect("peeked");
            let mut f = Fields::new(line, &tokens);
            f.keyword("pickup")?;
            let vertex = f.next("vertex")?;
            let time = f.next("time")?;
            let mut passengers = Vec::new();
            while f.peek().is_some() {
                passengers.push(TripId(f.next("passengers")?));
            }
            pickups.push(Pickup { vertex, time, passengers });
        }
        let plan = PickupPlan {
            path_index,
            route,
            departure,
            pickups,
            arrival,
        };
        if sol.insert(driver, Assignment { served, plan }).is_some() {
            return Err(CodecError::Parse {
                line,
                field: "driver",
                message: format!("driver {driver} listed twice"),
            });
        }
    }
    if let Some((line, _)) = lines.next() {
        return Err(CodecError::Parse {
            line,
            field: "trailer",
            message: "unexpected line after the last driver".into(),
        });
    }
    Ok(sol)
}

/// Non-empty lines with comments stripped, tokenized and paired with 1-based
/// line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(k, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some((k + 1, tokens))
    })
}

fn next_line<'a>(
    lines: &mut impl Iterator<Item = (usize, Vec<&'a str>)>,
    field: &'static str,
) -> Result<(usize, Vec<&'a str>), CodecError> {
    lines.next().ok_or(CodecError::Parse {
        line: 0,
        field,
        message: "unexpected end of file".into(),
    })
}

struct Fields<'a, 'b> {
    line: usize,
    tokens: &'b [&'a str],
    at: usize,
}

impl<'a, 'b> Fields<'a, 'b> {
    fn new(line: usize, tokens: &'b [&'a str]) -> Self {
        Self { line, tokens, at: 0 }
    }

    fn error(&self, field: &'static str, message: impl Into<String>) -> CodecError {
        CodecError::Parse {
            line: self.line,
            field,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&'a str> {
        self.tokens.get(self.at).copied()
    }

    fn skip(&mut self) {
        self.at += 1;
    }

    fn next<T: FromStr>(&mut self, field: &'static str) -> Result<T, CodecError> {
        let tok = self.peek().ok_or_else(|| self.error(field, "missing value"))?;
        let value = tok
            .parse()
            .map_err(|_| self.error(field, format!("invalid value {tok:?}")))?;
        self.at += 1;
        Ok(value)
    }

    fn keyword(&mut self, word: &'static str) -> Result<(), CodecError> {
        match self.peek() {
            Some(tok) if tok == word => {
                self.at += 1;
                Ok(())
            }
            Some(tok) => Err(self.error(word, format!("expected {word:?}, found {tok:?}"))),
            None => Err(self.error(word, format!("expected {word:?}"))),
        }
    }

    fn end(&self) -> Result<(), CodecError> {
        match self.peek() {
            None => Ok(()),
            Some(tok) => Err(self.error("trailer", format!("unexpected token {tok:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factory::{gen_3partition_stop, ThreePartitionSpec};
    use crate::model::feasible_schedule;

    const SMALL: &str = "3 2 2\n0 1 2\n1 2 1\n1 0 2 1 0 1 0 10 0 1 2\n2 1 2 0 0 0 0 10 1 2\n";

    #[test]
    fn instance_round_trip() {
        let inst = read_instance(SMALL).unwrap();
        assert_eq!(write_instance(&inst), SMALL);
        assert_eq!(read_instance(&write_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn multiple_paths_and_comments() {
        let text = "# square\n4 4 1\n0 1 1\n0 2 1\n1 3 1\n2 3 1\n\n1 0 3 0 0 0 0 9 0 1 3 | 0 2 3 # two ways\n";
        let inst = read_instance(text).unwrap();
        assert_eq!(inst.trips()[0].preferred_paths, vec![vec![0, 1, 3], vec![0, 2, 3]]);
        assert_eq!(write_instance(&inst), "4 4 1\n0 1 1\n0 2 1\n1 3 1\n2 3 1\n1 0 3 0 0 0 0 9 0 1 3 | 0 2 3\n");
    }

    #[test]
    fn negative_capacity_names_field() {
        let bad = SMALL.replace("1 0 2 1 0 1", "1 0 2 -1 0 1");
        match read_instance(&bad) {
            Err(CodecError::Parse { line, field, .. }) => assert_eq!((line, field), (4, "capacity")),
            other => panic!("unexpected {other:?}"),
        }
        assert!(read_instance(&bad).unwrap_err().to_string().contains("capacity"));
    }

    #[test]
    fn truncated_and_trailing() {
        assert!(read_instance("3 2 2\n0 1 2\n").is_err());
        assert!(read_instance(&format!("{SMALL}9 9 9\n")).is_err());
        assert!(read_instance("").is_err());
    }

    #[test]
    fn gadget_round_trip() {
        let spec = ThreePartitionSpec::new(2, 7, vec![2, 2, 3, 2, 2, 3]).unwrap();
        let inst = gen_3partition_stop(&spec).unwrap();
        let text = write_instance(&inst);
        let back = read_instance(&text).unwrap();
        assert_eq!(back.trips(), inst.trips());
        assert_eq!(write_instance(&back), text);
    }

    #[test]
    fn solution_round_trip() {
        let inst = read_instance(SMALL).unwrap();
        let plan = feasible_schedule(&inst, TripId(1), &[TripId(2)]).unwrap().unwrap();
        let mut sol = Solution::new();
        sol.insert(
            TripId(1),
            Assignment {
                served: [TripId(1), TripId(2)].into(),
                plan,
            },
        );
        let text = write_solution(&sol);
        assert!(text.starts_with("solution 1\ndriver 1 path 0 depart "));
        assert_eq!(read_solution(&text).unwrap(), sol);
        assert_eq!(write_solution(&read_solution(&text).unwrap()), text);
        assert!(read_solution("solution 2\n").is_err());
        assert!(read_solution("nonsense 0\n").is_err());
    }
}
