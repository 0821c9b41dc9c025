//! Interpreter state and the command vocabulary shared by the REPL, scripts
//! and batch mode.

use std::fmt::Write;
use std::fs;
use std::path::{Path, PathBuf};

use fasill::engine::{render_dot, render_structured, render_text, rules_document};
use fasill::lattice::{parse_lattice, Carrier};
use fasill::similarity::{parse_sim, DEFAULT_TNORM};
use fasill::{
    builtin_unit_interval, close, format_answer, parse_goal, parse_program, ConnectiveKind,
    DerivationTree, Engine, Expression, FuzzyComputedAnswer, Lattice, ParseContext, Program, Rule,
    SimilarityEquation, SimilarityRelation, DEFAULT_MAX_DEPTH,
};

use crate::error::CliError;

/// Output format for derivation trees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum TreeFormat {
    Text,
    Dot,
    Structured,
}

impl TreeFormat {
    fn parse(word: &str) -> Option<Self> {
        match word {
            "text" => Some(TreeFormat::Text),
            "dot" => Some(TreeFormat::Dot),
            "structured" | "json" => Some(TreeFormat::Structured),
            _ => None,
        }
    }
}

/// What a command asks of the caller beyond printing its output.
#[derive(Debug, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Quit,
}

pub const HELP: &str = "\
load <file.fpl>    parse a program and add its rules
list               print the rules with their ids
clean              drop all rules and similarity equations
lat [<file>]       replace the lattice (no file: the unit interval)
show               describe the lattice
sim <file.sim>     add similarity equations and close the relation
tnorm <label>      close the relation under another conjunction
intro <goal>       evaluate a goal
tree [format]      print the derivation tree (text, dot, structured)
leaves             print the fuzzy computed answers
depth [<n>]        show or set the maximum tree depth
export             print the rules as a JSON document
help               this list
quit               leave
";

#[derive(Debug)]
pub struct Session {
    base_dir: PathBuf,
    programs: Vec<(PathBuf, String)>,
    sims: Vec<(PathBuf, String)>,
    lattice: Lattice,
    tnorm: String,
    rules: Vec<Rule>,
    equations: Vec<SimilarityEquation>,
    relation: SimilarityRelation,
    depth: usize,
    history: Vec<String>,
    goal: Option<Expression>,
    tree: Option<DerivationTree>,
}

impl Default for Session {
    fn default() -> Self {
        Self::new()
    }
}

fn relation(
    eqs: &[SimilarityEquation],
    lat: &Lattice,
    tnorm: &str,
) -> Result<SimilarityRelation, String> {
    close(eqs, lat, tnorm).map_err(|e| e.to_string())
}

/// `preferred` if the lattice defines it as a binary conjunction, else the
/// first binary conjunction it does define.
fn fallback_tnorm(lat: &Lattice, preferred: &str) -> Option<String> {
    if lat.tnorm(preferred).is_ok() {
        return Some(preferred.to_string());
    }
    lat.connectives()
        .find(|c| c.kind == ConnectiveKind::Conjunction && c.arity == 2)
        .map(|c| c.label.to_string())
}

impl Session {
    pub fn new() -> Self {
        let lattice = builtin_unit_interval();
        let relation = SimilarityRelation::identity(&lattice, DEFAULT_TNORM)
            .expect("the built-in lattice defines the default t-norm");
        Session {
            base_dir: PathBuf::new(),
            programs: Vec::new(),
            sims: Vec::new(),
            lattice,
            tnorm: DEFAULT_TNORM.into(),
            rules: Vec::new(),
            equations: Vec::new(),
            relation,
            depth: DEFAULT_MAX_DEPTH,
            history: Vec::new(),
            goal: None,
            tree: None,
        }
    }

    /// Relative file names in commands are resolved against `dir`.
    pub fn set_base_dir(&mut self, dir: impl Into<PathBuf>) {
        self.base_dir = dir.into();
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn relation(&self) -> &SimilarityRelation {
        &self.relation
    }

    pub fn tnorm(&self) -> &str {
        &self.tnorm
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn history(&self) -> &[String] {
        &self.history
    }

    pub fn tree(&self) -> Option<&DerivationTree> {
        self.tree.as_ref()
    }

    fn resolve(&self, file: &str) -> PathBuf {
        let p = Path::new(file);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    fn read(&self, file: &str) -> Result<(PathBuf, String), CliError> {
        let path = self.resolve(file);
        let text = fs::read_to_string(&path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok((path, text))
    }

    fn parse_rules(sources: &[(PathBuf, String)], lat: &Lattice) -> Result<Vec<Rule>, CliError> {
        let ctx = ParseContext::new(lat);
        let mut rules = Vec::new();
        for (path, text) in sources {
            let parsed = parse_program(text, &ctx).map_err(|e| CliError::Program {
                path: path.display().to_string(),
                error: e,
            })?;
            let offset = rules.len();
            rules.extend(parsed.into_iter().map(|mut r| {
                r.id += offset;
                r
            }));
        }
        Ok(rules)
    }

    /// Parses every similarity source; returns the equations and the last
    /// `~tnorm` directive seen.
    fn parse_sims(
        sources: &[(PathBuf, String)],
        lat: &Lattice,
    ) -> Result<(Vec<SimilarityEquation>, Option<String>), CliError> {
        let mut eqs = Vec::new();
        let mut tnorm = None;
        for (path, text) in sources {
            let file = parse_sim(text, lat).map_err(|e| CliError::Sim {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
            eqs.extend(file.equations);
            if file.tnorm.is_some() {
                tnorm = file.tnorm;
            }
        }
        Ok((eqs, tnorm))
    }

    fn invalidate(&mut self) {
        self.tree = None;
        self.goal = None;
    }

    pub fn load_program(&mut self, file: &str) -> Result<String, CliError> {
        let (path, text) = self.read(file)?;
        let mut sources = self.programs.clone();
        sources.push((path, text));
        let rules = Self::parse_rules(&sources, &self.lattice)?;
        let added = rules.len() - self.rules.len();
        self.programs = sources;
        self.rules = rules;
        self.invalidate();
        Ok(format!(
            "{added} rule(s) loaded, {} in total\n",
            self.rules.len()
        ))
    }

    pub fn load_lattice(&mut self, file: Option<&str>) -> Result<String, CliError> {
        let lattice = match file {
            None => builtin_unit_interval(),
            Some(f) => {
                let (path, text) = self.read(f)?;
                parse_lattice(&text).map_err(|e| CliError::Lattice {
                    path: path.display().to_string(),
                    message: e.to_string(),
                })?
            }
        };
        let tnorm = fallback_tnorm(&lattice, &self.tnorm).ok_or_else(|| CliError::Lattice {
            path: file.unwrap_or("<builtin>").into(),
            message: "no binary conjunction to use as t-norm".into(),
        })?;
        let rules = Self::parse_rules(&self.programs, &lattice)?;
        let (equations, _) = Self::parse_sims(&self.sims, &lattice)?;
        let relation = relation(&equations, &lattice, &tnorm).map_err(|message| CliError::Sim {
            path: "<session>".into(),
            message,
        })?;
        let mut out = String::new();
        if tnorm != self.tnorm {
            writeln!(
                out,
                "t-norm {} is not defined here, using {tnorm}",
                self.tnorm
            )
            .unwrap();
        }
        self.tnorm = tnorm;
        self.lattice = lattice;
        self.rules = rules;
        self.equations = equations;
        self.relation = relation;
        self.invalidate();
        writeln!(out, "lattice '{}' active", self.lattice.name()).unwrap();
        Ok(out)
    }

    pub fn load_sim(&mut self, file: &str) -> Result<String, CliError> {
        let (path, text) = self.read(file)?;
        let shown = path.display().to_string();
        let mut sources = self.sims.clone();
        sources.push((path, text));
        let (equations, directive) = Self::parse_sims(&sources, &self.lattice)?;
        let tnorm = directive.unwrap_or_else(|| self.tnorm.clone());
        let relation =
            relation(&equations, &self.lattice, &tnorm).map_err(|message| CliError::Sim {
                path: shown,
                message,
            })?;
        self.sims = sources;
        self.equations = equations;
        self.tnorm = tnorm;
        self.relation = relation;
        self.invalidate();
        let mut out = format!(
            "{} equation(s), closed under {}\n",
            self.equations.len(),
            self.tnorm
        );
        for w in self.relation.warnings() {
            writeln!(out, "warning: {w}").unwrap();
        }
        Ok(out)
    }

    pub fn set_tnorm(&mut self, label: &str) -> Result<String, CliError> {
        let relation = relation(&self.equations, &self.lattice, label).map_err(CliError::Usage)?;
        self.tnorm = label.into();
        self.relation = relation;
        self.invalidate();
        Ok(format!("closed under {label}\n"))
    }

    pub fn clean(&mut self) {
        self.programs.clear();
        self.sims.clear();
        self.rules.clear();
        self.equations.clear();
        if let Some(t) = fallback_tnorm(&self.lattice, DEFAULT_TNORM) {
            self.tnorm = t;
        }
        if let Ok(rel) = relation(&[], &self.lattice, &self.tnorm) {
            self.relation = rel;
        }
        self.invalidate();
    }

    pub fn program(&self) -> Program {
        Program::new(
            self.rules.clone(),
            self.lattice.clone(),
            self.relation.clone(),
        )
    }

    pub fn intro(&mut self, text: &str) -> Result<(), CliError> {
        let goal = parse_goal(text, &ParseContext::new(&self.lattice))
            .map_err(|error| CliError::Goal { error })?;
        self.history.push(text.to_string());
        self.goal = Some(goal);
        self.rebuild();
        Ok(())
    }

    fn rebuild(&mut self) {
        if let Some(goal) = &self.goal {
            let prog = self.program();
            self.tree = Some(Engine::new(&prog).build_tree(goal.clone(), self.depth));
        }
    }

    pub fn set_depth(&mut self, depth: usize) {
        self.depth = depth;
        self.rebuild();
    }

    fn cached(&self) -> Result<&DerivationTree, CliError> {
        self.tree
            .as_ref()
            .ok_or_else(|| CliError::Usage("no goal introduced; use 'intro <goal>' first".into()))
    }

    pub fn answers(&self, hide_bottom: bool) -> Result<Vec<FuzzyComputedAnswer>, CliError> {
        let tree = self.cached()?;
        Ok(tree
            .answers()
            .into_iter()
            .filter(|a| !hide_bottom || !self.lattice.is_bot(&a.value))
            .collect())
    }

    /// First runtime failure recorded in the cached tree.
    pub fn runtime_error(&self) -> Option<String> {
        self.tree
            .as_ref()?
            .root
            .walk()
            .into_iter()
            .find_map(|n| n.error.clone())
    }

    pub fn render_answers(&self, hide_bottom: bool) -> Result<String, CliError> {
        let mut out = String::new();
        for a in self.answers(hide_bottom)? {
            writeln!(out, "{}", format_answer(&a)).unwrap();
        }
        Ok(out)
    }

    pub fn render_tree(&self, format: TreeFormat) -> Result<String, CliError> {
        let tree = self.cached()?;
        Ok(match format {
            TreeFormat::Text => render_text(tree),
            TreeFormat::Dot => render_dot(tree),
            TreeFormat::Structured => render_structured(tree) + "\n",
        })
    }

    pub fn list(&self) -> String {
        let mut out = String::new();
        for r in &self.rules {
            writeln!(out, "R{}: {r}", r.id).unwrap();
        }
        out
    }

    pub fn show(&self) -> String {
        let lat = &self.lattice;
        let mut out = format!("lattice {}\n", lat.name());
        match lat.carrier() {
            Carrier::UnitInterval => out.push_str("members: real in [0,1]\n"),
            Carrier::Finite(fc) => {
                let names: Vec<&str> = fc.elements().iter().map(|e| &**e).collect();
                writeln!(out, "members: {}", names.join(", ")).unwrap();
            }
        }
        writeln!(out, "bot: {}\ntop: {}", lat.bot(), lat.top()).unwrap();
        let mut conns: Vec<String> = lat
            .connectives()
            .map(|c| format!("{}_{}/{}", c.kind.keyword(), c.label, c.arity))
            .collect();
        conns.sort();
        writeln!(out, "connectives: {}", conns.join(", ")).unwrap();
        writeln!(out, "tnorm: {}", self.tnorm).unwrap();
        out
    }

    /// Runs one command line and returns its output.
    pub fn execute(&mut self, line: &str) -> Result<(String, Flow), CliError> {
        let line = line.trim();
        let (cmd, arg) = match line.split_once(char::is_whitespace) {
            Some((c, a)) => (c, a.trim()),
            None => (line, ""),
        };
        let need = |what: &str| -> Result<&str, CliError> {
            if arg.is_empty() {
                Err(CliError::Usage(format!("'{cmd}' expects {what}")))
            } else {
                Ok(arg)
            }
        };
        let out = match cmd {
            "" => String::new(),
            "load" => self.load_program(need("a file")?)?,
            "list" => self.list(),
            "clean" => {
                self.clean();
                String::new()
            }
            "lat" => self.load_lattice((!arg.is_empty()).then_some(arg))?,
            "show" => self.show(),
            "sim" => self.load_sim(need("a file")?)?,
            "tnorm" => self.set_tnorm(need("a conjunction label")?)?,
            "intro" => {
                self.intro(need("a goal")?)?;
                String::new()
            }
            "tree" => {
                let format = if arg.is_empty() {
                    TreeFormat::Text
                } else {
                    TreeFormat::parse(arg)
                        .ok_or_else(|| CliError::Usage(format!("unknown tree format '{arg}'")))?
                };
                self.render_tree(format)?
            }
            "leaves" => {
                let mut out = self.render_answers(false)?;
                if let Some(e) = self.runtime_error() {
                    writeln!(out, "error: {e}").unwrap();
                }
                out
            }
            "depth" => {
                if arg.is_empty() {
                    format!("{}\n", self.depth)
                } else {
                    let n = arg
                        .parse()
                        .map_err(|_| CliError::Usage(format!("'{arg}' is not a depth")))?;
                    self.set_depth(n);
                    String::new()
                }
            }
            "export" => rules_document(&self.rules) + "\n",
            "help" => HELP.to_string(),
            "quit" | "exit" => return Ok((String::new(), Flow::Quit)),
            other => return Err(CliError::UnknownCommand(other.to_string())),
        };
        Ok((out, Flow::Continue))
    }
}
