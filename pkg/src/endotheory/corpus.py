'''Sentence corpora: frozen JSON files shipped in data/, and plain sentence
files where every top-level s-expression is one entry.'''
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import EndotheoryError, FormulaSyntaxError
from .formulas import Formula, language_of, parse, parse_many, to_sexp

ROUNDTRIP_CORPUS = 'roundtrip_corpus.json'
SECOND_ORDER_CORPUS = 'second_order_corpus.json'


@dataclass
class CorpusEntry:
    id: str
    sentence: str
    language: str
    expected: dict[str, bool] = field(default_factory=dict)
    provenance: str = ''

    @property
    def formula(self) -> Formula:
        return parse(self.sentence)

    def as_dict(self) -> dict:
        out = {'id': self.id, 'language': self.language, 'sentence': self.sentence}
        if self.expected:
            out['expected'] = dict(self.expected)
        if self.provenance:
            out['provenance'] = self.provenance
        return out


def _entries_from_json(data: dict, origin: str) -> list[CorpusEntry]:
    out = []
    seen = set()
    for raw in data.get('entries', []):
        try:
            e = CorpusEntry(raw['id'], raw['sentence'], raw['language'], dict(raw.get('expected', {})),
                            raw.get('provenance', ''))
        except KeyError as exc:
            raise EndotheoryError(f'{origin}: corpus entry lacks {exc}') from None
        if e.id in seen:
            raise EndotheoryError(f'{origin}: duplicate entry id {e.id!r}')
        seen.add(e.id)
        out.append(e)
    return out


def load_corpus(name: str) -> list[CorpusEntry]:
    '''A corpus shipped with the package, by file name.'''
    text = resources.files('endotheory').joinpath('data', name).read_text()
    return _entries_from_json(json.loads(text), name)


def corpus_groups(name: str) -> list[str]:
    text = resources.files('endotheory').joinpath('data', name).read_text()
    return list(json.loads(text).get('groups', []))


def read_corpus_file(path: str | Path) -> list[CorpusEntry]:
    '''Entries of a .json corpus, or one entry per sentence of a sentence file.

    Sentence-file entries are named <file>:<line> after the line where the
    sentence starts.
    '''
    path = Path(path)
    text = path.read_text()
    if path.suffix == '.json':
        return _entries_from_json(json.loads(text), str(path))
    entries = []
    for line, f in _sentences_with_lines(text, str(path)):
        entries.append(CorpusEntry(f'{path.name}:{line}', to_sexp(f), language_of(f)))
    return entries


def _sentences_with_lines(text: str, origin: str):
    '''Split on balanced top-level parentheses and parse each chunk.'''
    out = []
    depth = 0
    start = None
    start_line = 0
    line = 1
    in_comment = False
    for i, ch in enumerate(text):
        if ch == '\n':
            line += 1
            in_comment = False
            continue
        if in_comment:
            continue
        if ch == ';':
            in_comment = True
        elif ch == '(':
            if depth == 0:
                start, start_line = i, line
            depth += 1
        elif ch == ')':
            depth -= 1
            if depth < 0:
                raise FormulaSyntaxError(f'{origin}:{line}: unbalanced )')
            if depth == 0:
                try:
                    out.append((start_line, parse_many(text[start:i + 1], start_line - 1)[0]))
                except FormulaSyntaxError as exc:
                    raise FormulaSyntaxError(f'{origin}:{exc.line or start_line}: {exc.message}') from None
        elif not ch.isspace() and depth == 0:
            raise FormulaSyntaxError(f'{origin}:{line}: text outside a sentence')
    if depth:
        raise FormulaSyntaxError(f'{origin}:{start_line}: unclosed (')
    return out
