'''Formula syntax for the group, ring and second-order group languages.

Object variables are plain strings.  A predicate variable is identified by
its (name, arity) pair.  The text form is one s-expression per sentence:

    (eq x y) (plus x y z) (times x y z) (pred P x1 ... xl)
    (not f) (and f g) (or f g) (implies f g) (iff f g)
    (forall x f) (exists x f) (forall2 (P l [hint]) f) (exists2 (P l [hint]) f)

with hint one of full, card<=K, endo, subgroup, homfrom:<setname>.
'''
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Union

from .errors import ArityConflictError, FormulaSyntaxError, InadmissibleSubstitution, SignatureError


class Signature(Enum):
    GROUP = 'group'
    RING = 'ring'


# ---------------------------------------------------------------- hints

@dataclass(frozen=True)
class Hint:
    '''How a predicate quantifier enumerates its range.

    kind is 'full', 'card' (at most `bound` tuples), or one of the guards
    'endo', 'subgroup', 'homfrom' ('homfrom' names a unary relation in `param`).
    '''
    kind: str
    bound: int | None = None
    param: str | None = None

    def __post_init__(self):
        if self.kind not in ('full', 'card', 'endo', 'subgroup', 'homfrom'):
            raise ValueError(f'unknown hint {self.kind!r}')
        if (self.kind == 'card') != (self.bound is not None):
            raise ValueError('card hints need a bound, and only card hints have one')
        if (self.kind == 'homfrom') != (self.param is not None):
            raise ValueError('homfrom hints need a set name')

    @property
    def is_guard(self) -> bool:
        return self.kind in ('endo', 'subgroup', 'homfrom')

    def __str__(self):
        if self.kind == 'card':
            return f'card<={self.bound}'
        if self.kind == 'homfrom':
            return f'homfrom:{self.param}'
        return self.kind

    @classmethod
    def parse(cls, token: str) -> 'Hint':
        if token in ('full', 'endo', 'subgroup'):
            return cls(token)
        m = re.fullmatch(r'card<=(\d+)', token)
        if m:
            return cls('card', bound=int(m.group(1)))
        m = re.fullmatch(r'homfrom:([A-Za-z_][A-Za-z0-9_]*)', token)
        if m:
            return cls('homfrom', param=m.group(1))
        raise ValueError(f'unknown hint {token!r}')


FULL = Hint('full')
ENDO = Hint('endo')
SUBGROUP = Hint('subgroup')


def card_at_most(k: int) -> Hint:
    return Hint('card', bound=k)


def hom_from(setname: str) -> Hint:
    return Hint('homfrom', param=setname)


# ---------------------------------------------------------------- nodes

class Node:
    __slots__ = ()

    def __str__(self):
        return to_sexp(self)


@dataclass(frozen=True, repr=False)
class Eq(Node):
    x: str
    y: str


@dataclass(frozen=True, repr=False)
class Plus(Node):
    '''x = y + z'''
    x: str
    y: str
    z: str


@dataclass(frozen=True, repr=False)
class Times(Node):
    '''x = y * z, the product that applies y first'''
    x: str
    y: str
    z: str


@dataclass(frozen=True, repr=False)
class Pred(Node):
    name: str
    args: tuple[str, ...]

    @property
    def arity(self) -> int:
        return len(self.args)


@dataclass(frozen=True, repr=False)
class Not(Node):
    f: 'Formula'


@dataclass(frozen=True, repr=False)
class And(Node):
    a: 'Formula'
    b: 'Formula'


@dataclass(frozen=True, repr=False)
class Or(Node):
    a: 'Formula'
    b: 'Formula'


@dataclass(frozen=True, repr=False)
class Implies(Node):
    a: 'Formula'
    b: 'Formula'


@dataclass(frozen=True, repr=False)
class Iff(Node):
    a: 'Formula'
    b: 'Formula'


@dataclass(frozen=True, repr=False)
class ForallObj(Node):
    var: str
    body: 'Formula'


@dataclass(frozen=True, repr=False)
class ExistsObj(Node):
    var: str
    body: 'Formula'


@dataclass(frozen=True, repr=False)
class ForallPred(Node):
    name: str
    arity: int
    hint: Hint | None
    body: 'Formula'


@dataclass(frozen=True, repr=False)
class ExistsPred(Node):
    name: str
    arity: int
    hint: Hint | None
    body: 'Formula'


Formula = Union[Eq, Plus, Times, Pred, Not, And, Or, Implies, Iff, ForallObj, ExistsObj, ForallPred, ExistsPred]

ATOMS = (Eq, Plus, Times, Pred)
BINARY = (And, Or, Implies, Iff)
OBJ_QUANT = (ForallObj, ExistsObj)
PRED_QUANT = (ForallPred, ExistsPred)


def _repr(self):
    return f'<{type(self).__name__} {to_sexp(self)}>'


def _install_cached_hash(cls):
    # formulas are shared DAGs used as dict keys; hash each node once
    field_hash = cls.__hash__

    def __hash__(self):
        d = self.__dict__
        h = d.get('_hash')
        if h is None:
            h = field_hash(self)
            object.__setattr__(self, '_hash', h)
        return h

    cls.__hash__ = __hash__


for _cls in (Eq, Plus, Times, Pred, Not, And, Or, Implies, Iff, ForallObj, ExistsObj, ForallPred, ExistsPred):
    _cls.__repr__ = _repr
    _install_cached_hash(_cls)


def atom_vars(f) -> tuple[str, ...]:
    if isinstance(f, Eq):
        return (f.x, f.y)
    if isinstance(f, (Plus, Times)):
        return (f.x, f.y, f.z)
    if isinstance(f, Pred):
        return f.args
    raise TypeError(f'{type(f).__name__} is not an atom')


# ---------------------------------------------------------------- builders

def conj(*fs: Formula) -> Formula:
    '''Right-nested conjunction; the evaluation order is the argument order.'''
    fs = [f for f in fs if f is not None]
    if not fs:
        raise ValueError('empty conjunction')
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = And(f, out)
    return out


def disj(*fs: Formula) -> Formula:
    fs = [f for f in fs if f is not None]
    if not fs:
        raise ValueError('empty disjunction')
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = Or(f, out)
    return out


def forall(vars_: Iterable[str] | str, body: Formula) -> Formula:
    if isinstance(vars_, str):
        vars_ = vars_.split()
    for v in reversed(list(vars_)):
        body = ForallObj(v, body)
    return body


def exists(vars_: Iterable[str] | str, body: Formula) -> Formula:
    if isinstance(vars_, str):
        vars_ = vars_.split()
    for v in reversed(list(vars_)):
        body = ExistsObj(v, body)
    return body


def neq(x: str, y: str) -> Formula:
    return Not(Eq(x, y))


# ---------------------------------------------------------------- traversal

def children(f: Formula) -> tuple:
    if isinstance(f, ATOMS):
        return ()
    if isinstance(f, Not):
        return (f.f,)
    if isinstance(f, BINARY):
        return (f.a, f.b)
    return (f.body,)


def walk(f: Formula) -> Iterator[Formula]:
    '''Pre-order traversal visiting each shared subformula object once.'''
    stack = [f]
    seen = set()
    while stack:
        g = stack.pop()
        if id(g) in seen:
            continue
        seen.add(id(g))
        yield g
        stack.extend(reversed(children(g)))


def size(f: Formula) -> int:
    return sum(1 for _ in walk(f))


def free_vars(f: Formula) -> tuple[frozenset, frozenset]:
    '''Free object variables and free (name, arity) predicate variables.

    A homfrom hint counts as an occurrence of its unary set variable.
    '''
    d = f.__dict__
    res = d.get('_free')
    if res is not None:
        return res
    if isinstance(f, Pred):
        res = (frozenset(f.args), frozenset({(f.name, f.arity)}))
    elif isinstance(f, ATOMS):
        res = (frozenset(atom_vars(f)), frozenset())
    elif isinstance(f, Not):
        res = free_vars(f.f)
    elif isinstance(f, BINARY):
        a, b = free_vars(f.a), free_vars(f.b)
        res = (a[0] | b[0], a[1] | b[1])
    elif isinstance(f, OBJ_QUANT):
        o, p = free_vars(f.body)
        res = (o - {f.var}, p)
    else:
        o, p = free_vars(f.body)
        p = p - {(f.name, f.arity)}
        if f.hint is not None and f.hint.kind == 'homfrom':
            p = p | {(f.hint.param, 1)}
        res = (o, p)
    object.__setattr__(f, '_free', res)
    return res


def has_predicate_quantifier(f: Formula) -> bool:
    d = f.__dict__
    res = d.get('_hasso')
    if res is None:
        if isinstance(f, PRED_QUANT):
            res = True
        else:
            res = any(has_predicate_quantifier(c) for c in children(f))
        object.__setattr__(f, '_hasso', res)
    return res


def is_sentence(f: Formula) -> bool:
    o, p = free_vars(f)
    return not o and not p


def all_object_vars(f: Formula) -> set[str]:
    out = set()
    for g in walk(f):
        if isinstance(g, ATOMS) and not isinstance(g, Pred):
            out.update(atom_vars(g))
        elif isinstance(g, Pred):
            out.update(g.args)
        elif isinstance(g, OBJ_QUANT):
            out.add(g.var)
    return out


def predicate_arities(f: Formula) -> dict[str, int]:
    '''Map each predicate name to its arity, raising on inconsistent use.'''
    table: dict[str, int] = {}

    def note(name, arity):
        old = table.setdefault(name, arity)
        if old != arity:
            raise ArityConflictError(f'predicate {name} used with arities {old} and {arity}')

    for g in walk(f):
        if isinstance(g, Pred):
            note(g.name, g.arity)
        elif isinstance(g, PRED_QUANT):
            note(g.name, g.arity)
            if g.hint is not None and g.hint.kind == 'homfrom':
                note(g.hint.param, 1)
    return table


def language_of(f: Formula) -> str:
    ''''group2' if second-order, 'ring' if it uses products, else 'group'.'''
    second = third = False
    for g in walk(f):
        if isinstance(g, (Pred,) + PRED_QUANT):
            second = True
        elif isinstance(g, Times):
            third = True
    if second and third:
        raise SignatureError('products and predicate variables in one formula')
    return 'group2' if second else ('ring' if third else 'group')


def check_signature(f: Formula, signature: Signature) -> None:
    lang = language_of(f)
    if signature is Signature.GROUP and lang == 'ring':
        raise SignatureError('ring product used in a group formula')
    if signature is Signature.RING and lang == 'group2':
        raise SignatureError('predicate variables are not part of the ring language')


# ---------------------------------------------------------------- substitution

def _rename_atom(g, t: str, x: str):
    sub = (lambda v: t if v == x else v)
    if isinstance(g, Eq):
        return Eq(sub(g.x), sub(g.y))
    if isinstance(g, Plus):
        return Plus(sub(g.x), sub(g.y), sub(g.z))
    if isinstance(g, Times):
        return Times(sub(g.x), sub(g.y), sub(g.z))
    return Pred(g.name, tuple(sub(v) for v in g.args))


def is_admissible(f: Formula, t: str, x: str) -> bool:
    '''False iff some free occurrence of x sits under a quantifier binding t.'''
    def go(g, bound):
        if isinstance(g, ATOMS):
            return not (x in atom_vars(g) and x not in bound and t in bound)
        if isinstance(g, OBJ_QUANT):
            return go(g.body, bound | {g.var})
        return all(go(c, bound) for c in children(g))

    return go(f, frozenset())


def fresh_name(base: str, taken: set[str]) -> str:
    '''Lowest-index variant of base not in taken.'''
    stem = base.rstrip('0123456789') or 'v'
    k = 1
    while f'{stem}{k}' in taken:
        k += 1
    return f'{stem}{k}'


def substitute(f: Formula, t: str, x: str, rename: bool = False) -> Formula:
    '''Replace the free occurrences of x by t.

    An inadmissible substitution raises unless rename=True, in which case
    bound variables that would capture t are renamed first.
    '''
    if t == x:
        return f
    if not rename and not is_admissible(f, t, x):
        raise InadmissibleSubstitution(f'substituting {t} for {x} is not admissible')
    taken = all_object_vars(f) | {t, x}

    def go(g):
        if isinstance(g, ATOMS):
            return _rename_atom(g, t, x)
        if isinstance(g, OBJ_QUANT):
            if g.var == x:
                return g
            body = g.body
            if g.var == t and x in free_vars(body)[0]:
                new = fresh_name(g.var, taken)
                taken.add(new)
                body = substitute(body, new, g.var)
                return type(g)(new, go(body))
            return type(g)(g.var, go(body))
        if isinstance(g, Not):
            return Not(go(g.f))
        if isinstance(g, BINARY):
            return type(g)(go(g.a), go(g.b))
        return type(g)(g.name, g.arity, g.hint, go(g.body))

    return go(f)


def substitute_pred(f: Formula, new: str, old: str) -> Formula:
    '''Rename free occurrences of predicate `old` (any arity); capture is not checked.'''
    def go(g):
        if isinstance(g, Pred):
            return Pred(new if g.name == old else g.name, g.args)
        if isinstance(g, ATOMS):
            return g
        if isinstance(g, Not):
            return Not(go(g.f))
        if isinstance(g, BINARY):
            return type(g)(go(g.a), go(g.b))
        if isinstance(g, OBJ_QUANT):
            return type(g)(g.var, go(g.body))
        hint = g.hint
        if hint is not None and hint.kind == 'homfrom' and hint.param == old:
            hint = hom_from(new)
        if g.name == old:
            return type(g)(g.name, g.arity, hint, g.body)
        return type(g)(g.name, g.arity, hint, go(g.body))

    return go(f)


# ---------------------------------------------------------------- abbreviations

def expand_abbreviations(f: Formula) -> Formula:
    '''Rewrite into atoms, Not, And, ForallObj and ForallPred only.'''
    if isinstance(f, ATOMS):
        return f
    if isinstance(f, Not):
        return Not(expand_abbreviations(f.f))
    if isinstance(f, And):
        return And(expand_abbreviations(f.a), expand_abbreviations(f.b))
    if isinstance(f, Or):
        return Not(And(Not(expand_abbreviations(f.a)), Not(expand_abbreviations(f.b))))
    if isinstance(f, Implies):
        # a => b  is  (not a) or b
        return expand_abbreviations(Or(Not(f.a), f.b))
    if isinstance(f, Iff):
        return And(expand_abbreviations(Implies(f.a, f.b)), expand_abbreviations(Implies(f.b, f.a)))
    if isinstance(f, ForallObj):
        return ForallObj(f.var, expand_abbreviations(f.body))
    if isinstance(f, ExistsObj):
        return Not(ForallObj(f.var, Not(expand_abbreviations(f.body))))
    if isinstance(f, ForallPred):
        return ForallPred(f.name, f.arity, f.hint, expand_abbreviations(f.body))
    return Not(ForallPred(f.name, f.arity, f.hint, Not(expand_abbreviations(f.body))))


def is_core(f: Formula) -> bool:
    return all(isinstance(g, ATOMS + (Not, And, ForallObj, ForallPred)) for g in walk(f))


# ---------------------------------------------------------------- printing

def to_sexp(f: Formula) -> str:
    out: list[str] = []

    def go(g):
        if isinstance(g, Eq):
            out.append(f'(eq {g.x} {g.y})')
        elif isinstance(g, Plus):
            out.append(f'(plus {g.x} {g.y} {g.z})')
        elif isinstance(g, Times):
            out.append(f'(times {g.x} {g.y} {g.z})')
        elif isinstance(g, Pred):
            out.append('(pred ' + ' '.join((g.name,) + g.args) + ')')
        elif isinstance(g, Not):
            out.append('(not ')
            go(g.f)
            out.append(')')
        elif isinstance(g, BINARY):
            out.append('(' + _BINARY_NAMES[type(g)] + ' ')
            go(g.a)
            out.append(' ')
            go(g.b)
            out.append(')')
        elif isinstance(g, OBJ_QUANT):
            out.append(f'({"forall" if isinstance(g, ForallObj) else "exists"} {g.var} ')
            go(g.body)
            out.append(')')
        else:
            kw = 'forall2' if isinstance(g, ForallPred) else 'exists2'
            hint = f' {g.hint}' if g.hint is not None else ''
            out.append(f'({kw} ({g.name} {g.arity}{hint}) ')
            go(g.body)
            out.append(')')

    go(f)
    return ''.join(out)


def pretty(f: Formula, width: int = 100) -> str:
    '''Indented s-expression that still parses back to f.'''
    flat = to_sexp(f)
    if len(flat) <= width:
        return flat

    def go(g, depth):
        pad = '  ' * depth
        text = to_sexp(g)
        if len(text) + len(pad) <= width or isinstance(g, ATOMS):
            return pad + text
        if isinstance(g, Not):
            return f'{pad}(not\n{go(g.f, depth + 1)})'
        if isinstance(g, BINARY):
            return f'{pad}({_BINARY_NAMES[type(g)]}\n{go(g.a, depth + 1)}\n{go(g.b, depth + 1)})'
        if isinstance(g, OBJ_QUANT):
            kw = 'forall' if isinstance(g, ForallObj) else 'exists'
            return f'{pad}({kw} {g.var}\n{go(g.body, depth + 1)})'
        kw = 'forall2' if isinstance(g, ForallPred) else 'exists2'
        hint = f' {g.hint}' if g.hint is not None else ''
        return f'{pad}({kw} ({g.name} {g.arity}{hint})\n{go(g.body, depth + 1)})'

    return go(f, 0)


_BINARY_NAMES = {And: 'and', Or: 'or', Implies: 'implies', Iff: 'iff'}
_BINARY_BY_NAME = {v: k for k, v in _BINARY_NAMES.items()}

# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r'\s+|;[^\n]*|(\()|(\))|([^\s()]+)')
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")


@dataclass
class _Tok:
    text: str
    pos: int
    line: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    line = 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f'unexpected character {text[pos]!r}', pos, line)
        if m.lastindex:
            toks.append(_Tok(m.group(m.lastindex), pos, line))
        line += text.count('\n', pos, m.end())
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, text: str, line_offset: int = 0):
        self.toks = _tokenize(text)
        for t in self.toks:
            t.line += line_offset
        self.i = 0

    def error(self, msg, tok=None):
        tok = tok or (self.toks[self.i] if self.i < len(self.toks) else None)
        if tok is None:
            return FormulaSyntaxError(msg + ' at end of input', None,
                                      self.toks[-1].line if self.toks else None)
        return FormulaSyntaxError(f'{msg} near {tok.text!r}', tok.pos, tok.line)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise self.error('unexpected end of input')
        self.i += 1
        return tok

    def expect(self, text):
        tok = self.next()
        if tok.text != text:
            raise self.error(f'expected {text!r}', tok)
        return tok

    def ident(self):
        tok = self.next()
        if not _IDENT.fullmatch(tok.text):
            raise self.error('expected a variable name', tok)
        return tok.text

    def formula(self) -> Formula:
        self.expect('(')
        head = self.next()
        kw = head.text
        if kw == 'eq':
            node = Eq(self.ident(), self.ident())
        elif kw in ('plus', 'times'):
            cls = Plus if kw == 'plus' else Times
            node = cls(self.ident(), self.ident(), self.ident())
        elif kw == 'pred':
            name = self.ident()
            args = []
            while self.peek() is not None and self.peek().text != ')':
                args.append(self.ident())
            if not args:
                raise self.error('predicate atom without arguments', head)
            node = Pred(name, tuple(args))
        elif kw == 'not':
            node = Not(self.formula())
        elif kw in _BINARY_BY_NAME:
            node = _BINARY_BY_NAME[kw](self.formula(), self.formula())
        elif kw in ('forall', 'exists'):
            var = self.ident()
            body = self.formula()
            node = (ForallObj if kw == 'forall' else ExistsObj)(var, body)
        elif kw in ('forall2', 'exists2'):
            self.expect('(')
            name = self.ident()
            ar = self.next()
            if not ar.text.isdigit() or int(ar.text) < 1:
                raise self.error('expected a positive arity', ar)
            hint = None
            if self.peek() is not None and self.peek().text != ')':
                htok = self.next()
                try:
                    hint = Hint.parse(htok.text)
                except ValueError as exc:
                    raise self.error(str(exc), htok) from None
            self.expect(')')
            body = self.formula()
            node = (ForallPred if kw == 'forall2' else ExistsPred)(name, int(ar.text), hint, body)
        else:
            raise self.error('unknown form', head)
        self.expect(')')
        return node


def parse(text: str) -> Formula:
    '''Parse exactly one formula.'''
    p = _Parser(text)
    f = p.formula()
    if p.peek() is not None:
        raise p.error('trailing input')
    predicate_arities(f)
    return f


def parse_many(text: str, line_offset: int = 0) -> list[Formula]:
    p = _Parser(text, line_offset)
    out = []
    while p.peek() is not None:
        f = p.formula()
        predicate_arities(f)
        out.append(f)
    return out
