//! Canonical printer. Output re-parses to the same term.

use std::fmt::{self, Write};

use super::term::{Config, Process, RuntimePrefix};

// Binding levels, loosest first.
const PAR: u8 = 0;
const SUM: u8 = 1;
const RES: u8 = 2;
const PRE: u8 = 3;

fn level_of_process(p: &Process) -> u8 {
    match p {
        Process::Par(..) => PAR,
        Process::Sum(..) => SUM,
        Process::Restrict(..) => RES,
        _ => PRE,
    }
}

fn level_of_config(x: &Config) -> u8 {
    match x {
        Config::Std(p) => level_of_process(p),
        Config::Par(..) => PAR,
        Config::Sum(..) => SUM,
        Config::Restrict(..) => RES,
        _ => PRE,
    }
}

fn write_process(out: &mut impl Write, p: &Process, min: u8) -> fmt::Result {
    if level_of_process(p) < min {
        out.write_char('(')?;
        write_process(out, p, PAR)?;
        return out.write_char(')');
    }
    match p {
        Process::Nil => out.write_char('0'),
        Process::Const(a) => out.write_str(a),
        Process::Prefix(act, cont) => {
            write!(out, "{act}.")?;
            write_process(out, cont, PRE)
        }
        Process::Timeout(main, alt) => {
            out.write_char('[')?;
            write_process(out, main, PAR)?;
            out.write_str("](")?;
            write_process(out, alt, PAR)?;
            out.write_char(')')
        }
        Process::Sum(l, r) => {
            write_process(out, l, SUM)?;
            out.write_str(" + ")?;
            write_process(out, r, RES)
        }
        Process::Par(l, r) => {
            write_process(out, l, PAR)?;
            out.write_str(" | ")?;
            write_process(out, r, SUM)
        }
        Process::Restrict(body, a) => {
            write_process(out, body, RES)?;
            write!(out, " \\ {a}")
        }
    }
}

fn write_config(out: &mut impl Write, x: &Config, min: u8) -> fmt::Result {
    if let Config::Std(p) = x {
        return write_process(out, p, min);
    }
    if level_of_config(x) < min {
        out.write_char('(')?;
        write_config(out, x, PAR)?;
        return out.write_char(')');
    }
    match x {
        Config::Std(_) => unreachable!(),
        Config::Keyed(rp, key, cont) => {
            match rp {
                RuntimePrefix::Act(a) => write!(out, "{a}[{}].", key.id)?,
                RuntimePrefix::SigmaDone => write!(out, "s[{}].", key.id)?,
                RuntimePrefix::Ghost => write!(out, "s_[{}].", key.id)?,
            }
            write_config(out, cont, PRE)
        }
        Config::TimeoutL { main, alt, key } => {
            out.write_char('[')?;
            write_config(out, main, PAR)?;
            out.write_str("](")?;
            write_process(out, alt, PAR)?;
            write!(out, ")@L[{}]", key.id)
        }
        Config::TimeoutR { main, alt, key } => {
            out.write_char('[')?;
            write_process(out, main, PAR)?;
            out.write_str("](")?;
            write_config(out, alt, PAR)?;
            write!(out, ")@R[{}]", key.id)
        }
        Config::Sum(l, r) => {
            write_config(out, l, SUM)?;
            out.write_str(" + ")?;
            write_config(out, r, RES)
        }
        Config::Par(l, r) => {
            write_config(out, l, PAR)?;
            out.write_str(" | ")?;
            write_config(out, r, SUM)
        }
        Config::Restrict(body, a) => {
            write_config(out, body, RES)?;
            write!(out, " \\ {a}")
        }
    }
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_process(f, self, PAR)
    }
}

impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_config(f, self, PAR)
    }
}

pub fn print(x: &Config) -> String {
    x.to_string()
}
