use thiserror::Error;

use super::tree::NeuronTree;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("neuron literal, position {pos}: {msg}")]
pub struct LiteralError {
    pub pos: usize,
    pub msg: String,
}

/// Parses the neuron-literal syntax `psi(b; w1 t1, ..., wk tk)`.
///
/// Each term is an input `x<i>` or a nested `psi(...)`, optionally preceded by
/// `-` or a coefficient `c*`. For example `psi(0; -x0, x1, psi(1; -x2, x3))`.
pub fn parse_neuron_literal(text: &str) -> Result<NeuronTree, LiteralError> {
    let mut p = Parser {
        s: text.as_bytes(),
        pos: 0,
    };
    let tree = p.neuron()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(tree)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> LiteralError {
        LiteralError {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.s[self.pos..].starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), LiteralError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{tok}'")))
        }
    }

    fn number(&mut self) -> Result<f64, LiteralError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len()
            && (self.s[self.pos].is_ascii_digit()
                || matches!(self.s[self.pos], b'.' | b'-' | b'+' | b'e' | b'E'))
        {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
        text.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or(LiteralError {
                pos: start,
                msg: format!("expected a number, found {text:?}"),
            })
    }

    fn neuron(&mut self) -> Result<NeuronTree, LiteralError> {
        self.expect("psi")?;
        self.expect("(")?;
        let bias = self.number()?;
        let mut inputs = Vec::new();
        if self.eat(";") {
            loop {
                inputs.push(self.term()?);
                if !self.eat(",") {
                    break;
                }
            }
        }
        self.expect(")")?;
        Ok(NeuronTree::node(bias, inputs))
    }

    fn term(&mut self) -> Result<(f64, NeuronTree), LiteralError> {
        self.skip_ws();
        let weight = if self
            .s
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_digit() || *c == b'.')
            || (self.s.get(self.pos) == Some(&b'-')
                && self
                    .s
                    .get(self.pos + 1)
                    .is_some_and(|c| c.is_ascii_digit() || *c == b'.'))
        {
            let w = self.number()?;
            self.expect("*")?;
            w
        } else if self.eat("-") {
            -1.0
        } else {
            self.eat("+");
            1.0
        };
        self.skip_ws();
        if self.s[self.pos..].starts_with(b"psi") {
            return Ok((weight, self.neuron()?));
        }
        if self.eat("x") {
            let start = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let idx = std::str::from_utf8(&self.s[start..self.pos])
                .expect("ascii")
                .parse::<usize>()
                .map_err(|_| self.err("expected a variable index"))?;
            return Ok((weight, NeuronTree::Input(idx)));
        }
        Err(self.err("expected an input 'x<i>' or a nested 'psi(...)'"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use NeuronTree::Input;

    #[test]
    fn flat_neuron() {
        let t = parse_neuron_literal("psi(0;-x0,x1,x2)").unwrap();
        assert_eq!(
            t,
            NeuronTree::node(0.0, vec![(-1.0, Input(0)), (1.0, Input(1)), (1.0, Input(2))])
        );
    }

    #[test]
    fn nested_and_coefficients() {
        let t = parse_neuron_literal(" psi( -1 ; x2 , psi(1; -x0, +x1), 0.5*x3, -2*x0)").unwrap();
        assert_eq!(
            t,
            NeuronTree::node(
                -1.0,
                vec![
                    (1.0, Input(2)),
                    (
                        1.0,
                        NeuronTree::node(1.0, vec![(-1.0, Input(0)), (1.0, Input(1))])
                    ),
                    (0.5, Input(3)),
                    (-2.0, Input(0)),
                ]
            )
        );
        assert_eq!(parse_neuron_literal(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn constant_neuron() {
        assert_eq!(
            parse_neuron_literal("psi(1)").unwrap(),
            NeuronTree::node(1.0, vec![])
        );
    }

    #[test]
    fn errors() {
        assert_eq!(parse_neuron_literal("psi(0; y1)").unwrap_err().pos, 7);
        assert!(parse_neuron_literal("psi(0; x1").is_err());
        assert!(parse_neuron_literal("psi(0; x1) x").is_err());
        assert!(parse_neuron_literal("psi(a; x1)").is_err());
    }
}
