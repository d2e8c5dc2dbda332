"""
Text renderings of expressions: plain (re-parseable), tex, json-tree
"""
import json

from . import scalars
from .conf import engine_setting
from .exceptions import RenderTooLarge
from .expr import ADD, CONST, DIV, MUL, POW, VAR, as_expr, walk

FORMATS = ('plain', 'tex', 'json-tree')

# binding levels: sum < product/quotient < power < atom
SUM, PRODUCT, POWER, ATOM = 1, 2, 3, 4

TEX_NAMES = {
    'z': 'z', 'zb': r'\bar{z}', 'u': 'u',
    'b': r'\mathsf{b}', 'bb': r'\bar{\mathsf{b}}',
    'c': r'\mathsf{c}', 'cb': r'\bar{\mathsf{c}}',
    's': r'\mathsf{s}', 'sb': r'\bar{\mathsf{s}}',
    'r': r'\mathsf{r}', 'rb': r'\bar{\mathsf{r}}',
}


def _const_level(q):
    re_num, re_den, im_num, _ = scalars.parts(q)
    if re_num and im_num:
        return SUM
    text = scalars.format_gaussian(q)
    if text.startswith('-'):
        return SUM
    if '/' in text or '*' in text:
        return PRODUCT
    return ATOM


def _wrap(text, level, needed):
    return f"({text})" if level < needed else text


class _Renderer:
    def __init__(self, limit):
        self.limit = limit

    def check(self, text):
        if len(text) > self.limit:
            raise RenderTooLarge(
                f"rendering exceeds {self.limit} characters; use the json-tree format"
            )
        return text

    def render(self, e):
        images = {}
        for node in walk([e]):
            images[node] = self.step(node, images)
        return images[e][0]


def _split_sign(node, children):
    """
    Pull a negative real leading coefficient out as a unary minus.
    """
    head = node.args[0]
    if head.op != CONST or not scalars.is_real(head.payload) or head.payload.x >= 0:
        return '', children
    magnitude = -head.payload
    if magnitude == scalars.ONE:
        return '-', children[1:]
    return '-', [(scalars.format_gaussian(magnitude), _const_level(magnitude))] + children[1:]


class _PlainRenderer(_Renderer):
    def step(self, node, images):
        op = node.op
        if op == CONST:
            return scalars.format_gaussian(node.payload), _const_level(node.payload)
        if op == VAR:
            return str(node.payload), ATOM
        children = [images[child] for child in node.args]
        if op == ADD:
            text = children[0][0]
            for child, _ in children[1:]:
                if child.startswith('-'):
                    text += f" - {child[1:]}"
                else:
                    text += f" + {child}"
            return self.check(text), SUM
        if op == MUL:
            prefix, children = _split_sign(node, children)
            text = prefix + '*'.join(_wrap(t, level, PRODUCT) for t, level in children)
            return self.check(text), SUM if prefix else PRODUCT
        if op == DIV:
            (num, num_level), (den, den_level) = children
            text = f"{_wrap(num, num_level, PRODUCT)}/{_wrap(den, den_level, POWER)}"
            return self.check(text), PRODUCT
        base, level = children[0]
        return self.check(f"{_wrap(base, level, ATOM)}^{node.payload}"), POWER


def _tex_rational(num, den):
    if den == 1:
        return str(num)
    sign = '-' if num < 0 else ''
    return rf"{sign}\frac{{{abs(num)}}}{{{den}}}"


def _tex_const(q):
    re_num, re_den, im_num, im_den = scalars.parts(q)
    re = _tex_rational(re_num, re_den)
    if not im_num:
        return re, (SUM if re_num < 0 else ATOM)
    if (im_num, im_den) == (1, 1):
        im = 'i'
    elif (im_num, im_den) == (-1, 1):
        im = '-i'
    else:
        im = _tex_rational(im_num, im_den) + 'i'
    if not re_num:
        return im, (SUM if im_num < 0 else ATOM)
    joiner = ' - ' if im.startswith('-') else ' + '
    return re + joiner + im.lstrip('-'), SUM


def _tex_var(v):
    if v.kind != 'jet':
        return TEX_NAMES[v.name]
    j = v.jet
    parts = 'z' * j.a + r'\bar{z}' * j.b + 'u' * j.c
    return rf"\varphi_{{{parts}}}" if parts else r'\varphi'


class _TexRenderer(_Renderer):
    def step(self, node, images):
        op = node.op
        if op == CONST:
            return _tex_const(node.payload)
        if op == VAR:
            return _tex_var(node.payload), ATOM
        children = [images[child] for child in node.args]
        if op == ADD:
            text = children[0][0]
            for child, _ in children[1:]:
                text += f" - {child[1:]}" if child.startswith('-') else f" + {child}"
            return self.check(text), SUM
        if op == MUL:
            prefix = ''
            if node.args[0].op == CONST and node.args[0].payload == -scalars.ONE:
                prefix, children = '-', children[1:]
            body = r' \, '.join(
                rf"\left({t}\right)" if level < PRODUCT else t for t, level in children
            )
            return self.check(prefix + body), SUM if prefix else PRODUCT
        if op == DIV:
            (num, _), (den, _) = children
            return self.check(rf"\frac{{{num}}}{{{den}}}"), ATOM
        base, level = children[0]
        base = rf"\left({base}\right)" if level < ATOM else base
        return self.check(f"{base}^{{{node.payload}}}"), POWER


def render_tree(e):
    """
    DAG as a node table; shared subexpressions appear once.
    """
    e = as_expr(e)
    ids = {}
    nodes = []
    for node in walk([e]):
        ids[node] = len(nodes)
        entry = {'id': ids[node], 'op': node.op}
        if node.op == CONST:
            entry['value'] = scalars.format_gaussian(node.payload)
        elif node.op == VAR:
            entry['name'] = str(node.payload)
        else:
            entry['args'] = [ids[child] for child in node.args]
            if node.op == POW:
                entry['exponent'] = node.payload
        nodes.append(entry)
    return {'root': ids[e], 'nodes': nodes}


def render(e, format='plain', limit=None):
    e = as_expr(e)
    if format not in FORMATS:
        raise ValueError(f"unknown format {format!r}")
    if format == 'json-tree':
        return json.dumps(render_tree(e), sort_keys=True)
    if limit is None:
        limit = engine_setting('RENDER_LIMIT')
    renderer = _PlainRenderer(limit) if format == 'plain' else _TexRenderer(limit)
    return renderer.render(e)
