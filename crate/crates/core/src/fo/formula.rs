use super::FinStructure;
use crate::error::FoError;
use rand::seq::SliceRandom;
use rand::Rng;
use std::fmt;

/// A variable (by position in the variable list) or a named element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(usize),
    Const(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    True,
    False,
    Atom { rel: String, args: Vec<Term> },
    Eq(Term, Term),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
}

impl Node {
    pub fn not(self) -> Node {
        Node::Not(Box::new(self))
    }

    pub fn and(self, other: Node) -> Node {
        Node::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Node) -> Node {
        Node::Or(Box::new(self), Box::new(other))
    }

    /// Conjunction of `parts`, `True` when empty.
    pub fn all(parts: impl IntoIterator<Item = Node>) -> Node {
        parts.into_iter().reduce(Node::and).unwrap_or(Node::True)
    }

    /// Disjunction of `parts`, `False` when empty.
    pub fn any(parts: impl IntoIterator<Item = Node>) -> Node {
        parts.into_iter().reduce(Node::or).unwrap_or(Node::False)
    }

    fn max_var(&self) -> Option<usize> {
        let term = |t: &Term| match t {
            Term::Var(v) => Some(*v),
            Term::Const(_) => None,
        };
        match self {
            Node::True | Node::False => None,
            Node::Atom { args, .. } => args.iter().filter_map(term).max(),
            Node::Eq(a, b) => term(a).max(term(b)),
            Node::Not(p) => p.max_var(),
            Node::And(p, q) | Node::Or(p, q) => p.max_var().max(q.max_var()),
        }
    }
}

/// A quantifier-free formula over a list of free variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QFFormula {
    pub vars: Vec<String>,
    pub body: Node,
}

impl QFFormula {
    pub fn new(vars: Vec<String>, body: Node) -> Result<Self, FoError> {
        if let Some(v) = body.max_var() {
            if v >= vars.len() {
                return Err(FoError::ArityMismatch {
                    expected: vars.len(),
                    got: v + 1,
                });
            }
        }
        Ok(QFFormula { vars, body })
    }

    /// Parses with the variable list taken in order of first appearance.
    pub fn parse(text: &str) -> Result<Self, FoError> {
        let mut p = Parser::new(text, None);
        let body = p.parse_all()?;
        Ok(QFFormula { vars: p.vars, body })
    }

    /// Parses against a fixed variable list; other identifiers in term
    /// position are rejected.
    pub fn parse_with_vars(text: &str, vars: &[&str]) -> Result<Self, FoError> {
        let mut p = Parser::new(text, Some(vars.iter().map(|v| v.to_string()).collect()));
        let body = p.parse_all()?;
        Ok(QFFormula { vars: p.vars, body })
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn eval(&self, tuple: &[usize], n: &FinStructure) -> Result<bool, FoError> {
        eval(self, tuple, n)
    }

    /// A random formula of the given depth over the relations of
    /// `signature`, with constants drawn from `consts`.
    pub fn random(
        rng: &mut impl Rng,
        vars: &[String],
        signature: &[(String, usize)],
        consts: &[usize],
        depth: usize,
    ) -> QFFormula {
        QFFormula {
            vars: vars.to_vec(),
            body: random_node(rng, vars.len(), signature, consts, depth),
        }
    }
}

fn random_term(rng: &mut impl Rng, nvars: usize, consts: &[usize]) -> Term {
    if consts.is_empty() || rng.gen_bool(0.6) {
        Term::Var(rng.gen_range(0..nvars))
    } else {
        Term::Const(*consts.choose(rng).expect("nonempty"))
    }
}

fn random_node(rng: &mut impl Rng, nvars: usize, sig: &[(String, usize)], consts: &[usize], depth: usize) -> Node {
    if depth == 0 || rng.gen_bool(0.3) {
        let atom_count = sig.len() + 1;
        let pick = rng.gen_range(0..atom_count);
        return if pick == sig.len() {
            Node::Eq(random_term(rng, nvars, consts), random_term(rng, nvars, consts))
        } else {
            let (rel, arity) = &sig[pick];
            Node::Atom {
                rel: rel.clone(),
                args: (0..*arity).map(|_| random_term(rng, nvars, consts)).collect(),
            }
        };
    }
    match rng.gen_range(0..3) {
        0 => random_node(rng, nvars, sig, consts, depth - 1).not(),
        1 => random_node(rng, nvars, sig, consts, depth - 1).and(random_node(rng, nvars, sig, consts, depth - 1)),
        _ => random_node(rng, nvars, sig, consts, depth - 1).or(random_node(rng, nvars, sig, consts, depth - 1)),
    }
}

/// Satisfaction of `phi` by `tuple` in `n`.
pub fn eval(phi: &QFFormula, tuple: &[usize], n: &FinStructure) -> Result<bool, FoError> {
    if tuple.len() != phi.vars.len() {
        return Err(FoError::ArityMismatch {
            expected: phi.vars.len(),
            got: tuple.len(),
        });
    }
    if let Some(&x) = tuple.iter().find(|&&x| x >= n.n) {
        return Err(FoError::InvalidStructure(format!("element {x} outside universe of size {}", n.n)));
    }
    eval_node(&phi.body, tuple, n)
}

fn value(t: &Term, tuple: &[usize], n: &FinStructure) -> Result<usize, FoError> {
    match *t {
        Term::Var(v) => Ok(tuple[v]),
        Term::Const(c) if c < n.n => Ok(c),
        Term::Const(c) => Err(FoError::InvalidStructure(format!("constant {c} outside universe of size {}", n.n))),
    }
}

fn eval_node(node: &Node, tuple: &[usize], n: &FinStructure) -> Result<bool, FoError> {
    Ok(match node {
        Node::True => true,
        Node::False => false,
        Node::Atom { rel, args } => {
            let vals = args.iter().map(|t| value(t, tuple, n)).collect::<Result<Vec<_>, _>>()?;
            n.holds(rel, &vals)?
        }
        Node::Eq(a, b) => value(a, tuple, n)? == value(b, tuple, n)?,
        Node::Not(p) => !eval_node(p, tuple, n)?,
        Node::And(p, q) => eval_node(p, tuple, n)? && eval_node(q, tuple, n)?,
        Node::Or(p, q) => eval_node(p, tuple, n)? || eval_node(q, tuple, n)?,
    })
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    vars: Vec<String>,
    fixed: bool,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, vars: Option<Vec<String>>) -> Self {
        Parser {
            text,
            pos: 0,
            fixed: vars.is_some(),
            vars: vars.unwrap_or_default(),
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, FoError> {
        Err(FoError::Parse {
            column: self.pos + 1,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.text[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn word(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest
            .char_indices()
            .find(|(_, c)| !(c.is_ascii_alphanumeric() || *c == '_'))
            .map_or(rest.len(), |(i, _)| i);
        if len == 0 {
            return None;
        }
        self.pos += len;
        Some(&rest[..len])
    }

    fn parse_all(&mut self) -> Result<Node, FoError> {
        let node = self.parse_or()?;
        if self.peek().is_some() {
            return self.error("unexpected trailing input");
        }
        Ok(node)
    }

    fn parse_or(&mut self) -> Result<Node, FoError> {
        let mut node = self.parse_and()?;
        while self.eat("|") {
            node = node.or(self.parse_and()?);
        }
        Ok(node)
    }

    fn parse_and(&mut self) -> Result<Node, FoError> {
        let mut node = self.parse_unary()?;
        while self.eat("&") {
            node = node.and(self.parse_unary()?);
        }
        Ok(node)
    }

    fn parse_unary(&mut self) -> Result<Node, FoError> {
        if self.peek() == Some('!') && !self.text[self.pos..].starts_with("!=") {
            self.pos += 1;
            return Ok(self.parse_unary()?.not());
        }
        if self.eat("(") {
            let node = self.parse_or()?;
            if !self.eat(")") {
                return self.error("expected `)`");
            }
            return Ok(node);
        }
        self.parse_atom()
    }

    fn term(&mut self, w: &str) -> Result<Term, FoError> {
        if let Ok(c) = w.parse::<usize>() {
            return Ok(Term::Const(c));
        }
        if let Some(i) = self.vars.iter().position(|v| v == w) {
            return Ok(Term::Var(i));
        }
        if self.fixed {
            return self.error(format!("unknown variable `{w}`"));
        }
        self.vars.push(w.to_string());
        Ok(Term::Var(self.vars.len() - 1))
    }

    fn parse_atom(&mut self) -> Result<Node, FoError> {
        let start = self.pos;
        let Some(w) = self.word() else {
            return self.error("expected an atom");
        };
        match w {
            "true" => return Ok(Node::True),
            "false" => return Ok(Node::False),
            _ => {}
        }
        if self.eat("(") {
            let mut args = Vec::new();
            loop {
                let Some(a) = self.word() else {
                    return self.error("expected a term");
                };
                args.push(self.term(a)?);
                if self.eat(")") {
                    break;
                }
                if !self.eat(",") {
                    return self.error("expected `,` or `)`");
                }
            }
            return Ok(Node::Atom { rel: w.to_string(), args });
        }
        let lhs = self.term(w)?;
        let negated = if self.eat("!=") {
            true
        } else if self.eat("=") {
            false
        } else {
            self.pos = start;
            return self.error("expected `(`, `=` or `!=` after identifier");
        };
        let Some(r) = self.word() else {
            return self.error("expected a term");
        };
        let eq = Node::Eq(lhs, self.term(r)?);
        Ok(if negated { eq.not() } else { eq })
    }
}

impl fmt::Display for QFFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |t: &Term| match t {
            Term::Var(v) => self.vars[*v].clone(),
            Term::Const(c) => c.to_string(),
        };
        fn go(node: &Node, term: &dyn Fn(&Term) -> String, out: &mut String) {
            match node {
                Node::True => out.push_str("true"),
                Node::False => out.push_str("false"),
                Node::Atom { rel, args } => {
                    out.push_str(rel);
                    out.push('(');
                    out.push_str(&args.iter().map(term).collect::<Vec<_>>().join(","));
                    out.push(')');
                }
                Node::Eq(a, b) => {
                    out.push_str(&term(a));
                    out.push('=');
                    out.push_str(&term(b));
                }
                Node::Not(p) => {
                    out.push('!');
                    go(p, term, out);
                }
                Node::And(p, q) | Node::Or(p, q) => {
                    out.push('(');
                    go(p, term, out);
                    out.push_str(if matches!(node, Node::And(..)) { " & " } else { " | " });
                    go(q, term, out);
                    out.push(')');
                }
            }
        }
        let mut s = String::new();
        go(&self.body, &term, &mut s);
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn evaluates_basic_formulas() {
        let lo = FinStructure::linear_order(3);
        let refl = QFFormula::parse("x = x").unwrap();
        assert!(refl.eval(&[1], &lo).unwrap());
        let lt = QFFormula::parse("lt(x,y)").unwrap();
        assert!(lt.eval(&[0, 2], &lo).unwrap());
        let strict = QFFormula::parse("lt(x,y) & !(x=y)").unwrap();
        assert!(!strict.eval(&[2, 2], &lo).unwrap());
        assert!(matches!(lt.eval(&[0], &lo), Err(FoError::ArityMismatch { .. })));
    }

    #[test]
    fn parser_handles_precedence_constants_and_errors() {
        let phi = QFFormula::parse("E(x,y) | x != 2 & !E(y,x)").unwrap();
        assert_eq!(phi.vars, vec!["x", "y"]);
        assert_eq!(phi.to_string(), "(E(x,y) | (!x=2 & !E(y,x)))");
        assert!(matches!(QFFormula::parse("E(x,"), Err(FoError::Parse { .. })));
        assert!(matches!(
            QFFormula::parse_with_vars("E(x,z)", &["x", "y"]),
            Err(FoError::Parse { column: 6, .. })
        ));
        let swapped = QFFormula::parse_with_vars("lt(y,x)", &["x", "y"]).unwrap();
        assert!(swapped.eval(&[2, 0], &FinStructure::linear_order(3)).unwrap());
    }

    #[test]
    fn display_round_trips() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let vars = vec!["x".to_string(), "y".to_string()];
        let sig = vec![("lt".to_string(), 2)];
        let lo = FinStructure::linear_order(4);
        for _ in 0..200 {
            let phi = QFFormula::random(&mut rng, &vars, &sig, &[1, 3], 3);
            let back = QFFormula::parse_with_vars(&phi.to_string(), &["x", "y"]).unwrap();
            for a in 0..4 {
                for b in 0..4 {
                    assert_eq!(phi.eval(&[a, b], &lo).unwrap(), back.eval(&[a, b], &lo).unwrap());
                }
            }
        }
    }
}
