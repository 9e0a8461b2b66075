//! Session state shared by `eval`, `repl`, and `check`: loaded programs,
//! the environment, and the evaluation configuration.

use std::path::Path;
use std::sync::Arc;

use tra_core::engine::ProgramVal;
use tra_core::error::{Error, Result};
use tra_core::lang::{self, Binding, Env, Value};
use tra_core::relation::materialize;
use tra_core::{EvalConfig, Universe};

pub struct Session {
    pub env: Env,
    pub config: EvalConfig,
    /// Depth override from `--universe-depth`, applied whenever a universe
    /// exists.
    pub depth_override: Option<usize>,
}

impl Session {
    pub fn new(config: EvalConfig, depth_override: Option<usize>) -> Self {
        Session {
            env: Env::new(),
            config,
            depth_override,
        }
    }

    /// Loads a program file and binds it under the file's stem. A
    /// `#universe` declaration merges into the session universe.
    pub fn load_program(&mut self, path: &Path) -> Result<String> {
        let src = std::fs::read_to_string(path).map_err(|e| {
            Error::InvalidProgram(format!("cannot read {}: {e}", path.display()))
        })?;
        let name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .ok_or_else(|| {
                Error::InvalidProgram(format!("cannot name program from {}", path.display()))
            })?
            .to_string();
        let program = lang::parse_program(&src)?;
        if let Some(decl) = &program.universe_decl {
            self.merge_universe(decl.clone());
        }
        self.env.bind_mut(
            name.clone(),
            Binding::Prog(ProgramVal::new(Arc::new(program))),
        );
        Ok(name)
    }

    fn merge_universe(&mut self, decl: Universe) {
        match &mut self.config.universe {
            Some(u) => u.merge(&decl),
            None => self.config.universe = Some(decl),
        }
        if let (Some(u), Some(d)) = (&mut self.config.universe, self.depth_override) {
            u.depth_bound = d;
        }
    }

    pub fn eval_source(&self, src: &str) -> Result<Value> {
        let expr = lang::parse_expr(src)?;
        lang::eval(&expr, &self.env, &self.config)
    }

    /// Renders a value in the table/relation print format. Intensional
    /// relations are materialized first; ones that cannot be materialized
    /// within the limits print as an intensional marker instead.
    pub fn render(&self, value: &Value) -> Result<String> {
        Ok(match value {
            Value::Table(t) => t.to_string(),
            Value::Rel(r) => match materialize(r, &self.config) {
                Ok(ext) => ext.to_string(),
                Err(Error::UniverseRequired)
                | Err(Error::ResourceExceeded(_))
                | Err(Error::Incomplete { .. }) => r.to_string(),
                Err(other) => return Err(other),
            },
            Value::Prog(pv) => {
                let preds: Vec<String> = pv
                    .ast
                    .defined_predicates()
                    .into_iter()
                    .map(|(p, a)| format!("{p}/{a}"))
                    .collect();
                format!("<program: {}>", preds.join(", "))
            }
        })
    }

    pub fn render_json(&self, value: &Value) -> Result<String> {
        Ok(match value {
            Value::Table(t) => t.to_json().to_string(),
            Value::Rel(r) => r.to_json(&self.config)?.to_string(),
            Value::Prog(pv) => {
                let preds: Vec<String> = pv
                    .ast
                    .defined_predicates()
                    .into_iter()
                    .map(|(p, a)| format!("{p}/{a}"))
                    .collect();
                format!("{{\"predicates\":{}}}", json_string_list(&preds))
            }
        })
    }

    /// The left-hand side of a `check` inclusion: a predicate looked up in
    /// the loaded programs (first definition wins), or a bound relation.
    pub fn resolve_check_lhs(&self, name: &str) -> Result<tra_core::Relation> {
        if let Some(Binding::Rel(r)) = self.env.lookup(name) {
            return Ok(r.clone());
        }
        for (_, binding) in self.env.iter() {
            if let Binding::Prog(pv) = binding {
                if pv.ast.defined_predicates().contains_key(name) {
                    return tra_core::Relation::intensional(pv.clone(), name);
                }
            }
        }
        Err(Error::Unbound(format!(
            "{name} is neither a bound relation nor a predicate of a loaded program"
        )))
    }
}

fn json_string_list(items: &[String]) -> String {
    let quoted: Vec<String> = items.iter().map(|s| format!("\"{s}\"")).collect();
    format!("[{}]", quoted.join(","))
}
