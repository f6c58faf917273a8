use crate::attr::AttributeValue;

use super::{AttributePredicate, CmpOp, EdgeConstraint, EdgeKind, MotifError, MotifQuery, MAX_MOTIF_SIZE};

enum Statement {
    Edge(String, EdgeKind, String),
    Predicate(String, String, CmpOp, AttributeValue),
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

type PResult<T> = Result<T, MotifError>;

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&self, expected: &str) -> MotifError {
        MotifError::Syntax {
            line: self.line,
            column: self.column,
            expected: expected.to_string(),
        }
    }

    fn skip_inline_space(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t' | '\r')) {
            self.bump();
        }
    }

    fn skip_comment(&mut self) {
        while !matches!(self.peek(), None | Some('\n')) {
            self.bump();
        }
    }

    fn eat(&mut self, s: &str) -> bool {
        let matches = s
            .chars()
            .enumerate()
            .all(|(i, c)| self.peek_at(i) == Some(c));
        if matches {
            for _ in 0..s.chars().count() {
                self.bump();
            }
        }
        matches
    }

    fn identifier(&mut self, what: &str) -> PResult<String> {
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return Err(self.error(what)),
        }
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        Ok(s)
    }

    fn statements(&mut self) -> PResult<Vec<Statement>> {
        let mut out = Vec::new();
        loop {
            self.skip_inline_space();
            match self.peek() {
                None => return Ok(out),
                Some('#') => self.skip_comment(),
                Some('\n' | ';') => {
                    self.bump();
                }
                Some(_) => {
                    out.push(self.statement()?);
                    self.skip_inline_space();
                    match self.peek() {
                        None | Some('\n' | ';' | '#') => {}
                        Some(_) => return Err(self.error("end of statement (newline or ';')")),
                    }
                }
            }
        }
    }

    fn statement(&mut self) -> PResult<Statement> {
        let first = self.identifier("vertex name")?;
        self.skip_inline_space();
        let kind = if self.eat("->") {
            EdgeKind::Directed
        } else if self.eat("!>") {
            EdgeKind::Forbidden
        } else if self.eat("-") {
            EdgeKind::Undirected
        } else if self.eat(".") {
            let key = self.identifier("attribute key")?;
            self.skip_inline_space();
            let op = self.operator()?;
            self.skip_inline_space();
            let value = self.value()?;
            return Ok(Statement::Predicate(first, key, op, value));
        } else {
            return Err(self.error("edge operator ('->', '-', '!>') or '.'"));
        };
        self.skip_inline_space();
        let second = self.identifier("vertex name")?;
        Ok(Statement::Edge(first, kind, second))
    }

    fn operator(&mut self) -> PResult<CmpOp> {
        for (text, op) in [
            ("!=", CmpOp::Ne),
            ("<=", CmpOp::Le),
            (">=", CmpOp::Ge),
            ("<", CmpOp::Lt),
            (">", CmpOp::Gt),
            ("=", CmpOp::Eq),
        ] {
            if self.eat(text) {
                return Ok(op);
            }
        }
        Err(self.error("comparison operator ('=', '!=', '<', '<=', '>', '>=')"))
    }

    fn value(&mut self) -> PResult<AttributeValue> {
        const EXPECTED: &str = "value (string, number, true or false)";
        match self.peek() {
            Some('"') => self.string(),
            Some(c) if c.is_ascii_digit() || (c == '-' && self.peek_at(1).is_some_and(|d| d.is_ascii_digit())) => {
                let (line, column) = (self.line, self.column);
                let mut text = String::new();
                while let Some(c) = self.peek() {
                    let sign_after_exp = (c == '-' || c == '+') && text.ends_with(['e', 'E']);
                    if c.is_ascii_digit() || c == '.' || c == 'e' || c == 'E' || sign_after_exp || (c == '-' && text.is_empty()) {
                        text.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                if let Ok(i) = text.parse::<i64>() {
                    Ok(AttributeValue::Int(i))
                } else if let Ok(x) = text.parse::<f64>() {
                    Ok(AttributeValue::Float(x))
                } else {
                    Err(MotifError::Syntax {
                        line,
                        column,
                        expected: "number".into(),
                    })
                }
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let (line, column) = (self.line, self.column);
                match self.identifier(EXPECTED)?.as_str() {
                    "true" => Ok(AttributeValue::Bool(true)),
                    "false" => Ok(AttributeValue::Bool(false)),
                    _ => Err(MotifError::Syntax {
                        line,
                        column,
                        expected: EXPECTED.into(),
                    }),
                }
            }
            _ => Err(self.error(EXPECTED)),
        }
    }

    fn string(&mut self) -> PResult<AttributeValue> {
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                None | Some('\n') => return Err(self.error("closing '\"'")),
                Some('"') => return Ok(AttributeValue::Str(s)),
                Some('\\') => match self.bump() {
                    Some('"') => s.push('"'),
                    Some('\\') => s.push('\\'),
                    Some('n') => s.push('\n'),
                    Some('t') => s.push('\t'),
                    Some('r') => s.push('\r'),
                    _ => return Err(self.error("escape sequence (\\\", \\\\, \\n, \\t, \\r)")),
                },
                Some(c) => s.push(c),
            }
        }
    }
}

/// Parses motif source text into a validated query.
pub fn parse_motif(source: &str) -> Result<MotifQuery, MotifError> {
    let mut parser = Parser {
        chars: source.chars().collect(),
        pos: 0,
        line: 1,
        column: 1,
    };
    let statements = parser.statements()?;

    let mut vertices: Vec<String> = Vec::new();
    let index_of =|name: &str, vertices: &mut Vec<String>| match vertices
        .iter()
        .position(|v| v == name)
    {
        Some(i) => i,
        None => {
            vertices.push(name.to_string());
            vertices.len() - 1
        }
    };
    let mut edges = Vec::new();
    for st in &statements {
        if let Statement::Edge(a, kind, b) = st {
            let s = index_of(a, &mut vertices);
            let d = index_of(b, &mut vertices);
            edges.push(EdgeConstraint::new(s, d, *kind));
        }
    }
    let mut predicates = Vec::new();
    for st in statements {
        if let Statement::Predicate(v, key, op, value) = st {
            let vertex = vertices
                .iter()
                .position(|x| *x == v)
                .ok_or(MotifError::UnknownVertexInPredicate(v))?;
            predicates.push(AttributePredicate {
                vertex,
                key,
                op,
                value,
            });
        }
    }
    if vertices.len() > MAX_MOTIF_SIZE {
        return Err(MotifError::MotifTooLarge(vertices.len()));
    }
    MotifQuery::new(vertices, edges, predicates, false)
}
