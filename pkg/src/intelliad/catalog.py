"""Ad integration identification over decompiled app trees and raw DEX files.

A network counts as integrated when one of its type prefixes is referenced by
the app's code. Formats come from two declaration routes: constants or ad
classes referenced directly in code, and ad-view ids that code looks up and
that resolve to an element in a layout XML file.
"""

import enum
import json
import logging
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .dex import DexFile
from .errors import MalformedCatalog, UnreadableInput, UnsupportedInputKind

log = logging.getLogger(__name__)

CODE_SUFFIXES = (".smali", ".java", ".kt")


class AdFormat(enum.Enum):
    BANNER = "Banner"
    SMART_BANNER = "SmartBanner"
    FULL_BANNER = "FullBanner"
    INTERSTITIAL = "Interstitial"
    VIDEO = "Video"

    @property
    def nominal_size(self):
        """(width, height) in px, or None for adaptive/full-screen formats."""
        return _NOMINAL_SIZES.get(self)


_NOMINAL_SIZES = {AdFormat.BANNER: (320, 50), AdFormat.FULL_BANNER: (468, 60)}


@dataclass(frozen=True)
class NetworkEntry:
    name: str
    type_prefixes: tuple
    format_constants: dict
    layout_markers: tuple = ()

    def owns_type(self, dotted):
        return any(dotted.startswith(p) for p in self.type_prefixes)


@dataclass(frozen=True)
class AdNetworkCatalog:
    entries: dict

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries.values())

    def network_of(self, dotted):
        """Name of the network owning a fully-qualified dotted type, or None."""
        for entry in self.entries.values():
            if entry.owns_type(dotted):
                return entry.name
        return None

    def to_json(self):
        return {
            e.name: {
                "type_prefixes": list(e.type_prefixes),
                "format_constants": {k: v.value for k, v in e.format_constants.items()},
                "layout_markers": list(e.layout_markers),
            }
            for e in self.entries.values()
        }


@dataclass(frozen=True)
class Placement:
    network: str
    format: AdFormat


@dataclass
class AdIntegrationScheme:
    placements: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def ad_count(self):
        return len(self.placements)

    def pairs(self):
        return [(p.network, p.format) for p in self.placements]

    def to_json(self, app_id):
        return {
            "app_id": app_id,
            "placements": [{"network": p.network, "format": p.format.value}
                           for p in self.placements],
            "ad_count": self.ad_count,
            "warnings": list(self.warnings),
        }


class InputKind(enum.Enum):
    DECOMPILED_TREE = "DecompiledTree"
    RAW_DEX = "RawDex"


@dataclass(frozen=True)
class AppPackageInput:
    kind: InputKind
    root: Path

    def __post_init__(self):
        object.__setattr__(self, "root", Path(self.root))
        object.__setattr__(self, "kind", InputKind(self.kind))

    @classmethod
    def detect(cls, root):
        """Pick the input kind from the directory contents."""
        root = Path(root)
        if not root.exists():
            raise UnreadableInput(root, "no such file or directory")
        if root.is_file() and root.suffix == ".dex":
            return cls(InputKind.RAW_DEX, root)
        if _code_files(root):
            return cls(InputKind.DECOMPILED_TREE, root)
        if _dex_files(root):
            return cls(InputKind.RAW_DEX, root)
        raise UnreadableInput(root, "contains neither decompiled code nor .dex files")

    def validate(self):
        if not self.root.exists():
            raise UnreadableInput(self.root, "no such file or directory")
        if self.kind is InputKind.DECOMPILED_TREE and not _code_files(self.root):
            raise UnreadableInput(self.root, "decompiled tree has no code files")
        if self.kind is InputKind.RAW_DEX and not _dex_files(self.root):
            raise UnreadableInput(self.root, "no .dex files found")

    def app_id(self):
        manifest = self.root / "AndroidManifest.xml" if self.root.is_dir() else None
        if manifest is not None and manifest.is_file():
            try:
                pkg = ET.parse(manifest).getroot().get("package")
            except ET.ParseError:
                pkg = None
            if pkg:
                return pkg
        return self.root.stem if self.root.is_file() else self.root.name


def _code_files(root):
    if root.is_file():
        return [root] if root.suffix in CODE_SUFFIXES else []
    return sorted(p for p in root.rglob("*") if p.suffix in CODE_SUFFIXES and p.is_file())


def _dex_files(root):
    if root.is_file():
        return [root] if root.suffix == ".dex" else []
    return sorted(p for p in root.rglob("*.dex") if p.is_file())


# ---------------------------------------------------------------- catalog I/O

def _no_duplicate_keys(pairs):
    seen = {}
    for key, value in pairs:
        if key in seen:
            raise MalformedCatalog(f"duplicate key {key!r}")
        seen[key] = value
    return seen


def parse_catalog(obj):
    if not isinstance(obj, dict) or not obj:
        raise MalformedCatalog("catalog must be a non-empty JSON object")
    entries = {}
    owner_of_prefix = {}
    for name, body in obj.items():
        if not isinstance(body, dict):
            raise MalformedCatalog(f"{name}: entry must be an object")
        prefixes = body.get("type_prefixes")
        if not prefixes or not isinstance(prefixes, list) or \
                not all(isinstance(p, str) and p for p in prefixes):
            raise MalformedCatalog(f"{name}: type_prefixes must be a non-empty list of strings")
        for p in prefixes:
            if p in owner_of_prefix:
                raise MalformedCatalog(
                    f"prefix {p!r} claimed by both {owner_of_prefix[p]} and {name}")
            owner_of_prefix[p] = name
        constants = body.get("format_constants", {})
        if not isinstance(constants, dict):
            raise MalformedCatalog(f"{name}: format_constants must be an object")
        formats = {}
        for const, fmt in constants.items():
            try:
                formats[const] = AdFormat(fmt)
            except ValueError:
                raise MalformedCatalog(f"{name}: unknown ad format {fmt!r} for {const}") from None
        markers = body.get("layout_markers", [])
        if not isinstance(markers, list) or not all(isinstance(m, str) for m in markers):
            raise MalformedCatalog(f"{name}: layout_markers must be a list of strings")
        entries[name] = NetworkEntry(name, tuple(prefixes), formats, tuple(markers))
    return AdNetworkCatalog(entries)


def load_catalog(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MalformedCatalog(f"cannot read catalog {path}: {exc}") from exc
    try:
        obj = json.loads(text, object_pairs_hook=_no_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise MalformedCatalog(f"{path}: {exc}") from exc
    return parse_catalog(obj)


def default_catalog():
    """The bundled catalog (AdMob, MoPub, Amazon, InMobi)."""
    ref = resources.files("intelliad") / "data" / "catalog.json"
    return parse_catalog(json.loads(ref.read_text(encoding="utf-8")))


# ---------------------------------------------------------- network detection

def _prefix_patterns(prefix):
    dotted = re.escape(prefix)
    slashed = re.escape("L" + prefix.replace(".", "/"))
    return (re.compile(r"(?<![\w$.])" + dotted), re.compile(r"(?<![\w$/])" + slashed))


def _read_text(path):
    try:
        return path.read_text(encoding="utf-8", errors="replace")
    except OSError as exc:
        raise UnreadableInput(path, exc.strerror or str(exc)) from exc


def detect_networks(app, catalog):
    """Names of the catalog networks whose types the app references."""
    app.validate()
    if app.kind is InputKind.RAW_DEX:
        return _detect_in_dex(app, catalog)
    patterns = {e.name: [pat for p in e.type_prefixes for pat in _prefix_patterns(p)]
                for e in catalog}
    found = set()
    for path in _code_files(app.root):
        text = _read_text(path)
        for name, pats in patterns.items():
            if name not in found and any(p.search(text) for p in pats):
                found.add(name)
        if len(found) == len(patterns):
            break
    return found


def _detect_in_dex(app, catalog):
    descriptor_prefixes = [("L" + p.replace(".", "/"), e.name)
                           for e in catalog for p in e.type_prefixes]
    found = set()
    for path in _dex_files(app.root):
        try:
            dex = DexFile.from_path(path)
        except OSError as exc:
            raise UnreadableInput(path, exc.strerror or str(exc)) from exc
        for desc in dex.type_descriptors():
            desc = desc.lstrip("[")
            for prefix, name in descriptor_prefixes:
                if desc.startswith(prefix):
                    found.add(name)
    return found


# ------------------------------------------------------------ format routes

_ANDROID_ID = "{http://schemas.android.com/apk/res/android}id"


def _local(name):
    return name.rsplit("}", 1)[-1].rsplit(":", 1)[-1]


def _layout_index(root):
    """Map view id name -> (tag, {attr local name: value}) over res/layout*/."""
    index = {}
    res = root / "res"
    if not res.is_dir():
        return index
    layouts = sorted(p for d in res.glob("layout*") if d.is_dir() for p in d.rglob("*.xml"))
    for path in layouts:
        try:
            tree = ET.parse(path)
        except ET.ParseError as exc:
            log.warning("skipping unparsable layout %s: %s", path, exc)
            continue
        for elem in tree.iter():
            ref = elem.get(_ANDROID_ID) or elem.get("android:id")
            if not ref or "/" not in ref:
                continue
            name = ref.split("/", 1)[1]
            attrs = {_local(k): v for k, v in elem.attrib.items()}
            index.setdefault(name, (elem.tag, attrs))
    return index


def _public_ids(root):
    """Numeric resource id -> name for type="id" entries in res/values/public.xml."""
    path = root / "res" / "values" / "public.xml"
    out = {}
    if path.is_file():
        try:
            for elem in ET.parse(path).getroot():
                if elem.get("type") == "id" and elem.get("id") and elem.get("name"):
                    out[int(elem.get("id"), 16)] = elem.get("name")
        except (ET.ParseError, ValueError) as exc:
            log.warning("ignoring malformed %s: %s", path, exc)
    return out


def _layout_format(entry, tag, attrs):
    for key, value in attrs.items():
        if key in entry.layout_markers and value in entry.format_constants:
            return entry.format_constants[value]
    simple = tag.rsplit(".", 1)[-1]
    if simple in entry.format_constants:
        return entry.format_constants[simple]
    return AdFormat.BANNER


def _file_package(text, suffix):
    if suffix == ".smali":
        m = re.search(r"^\.class\b[^\n]*?\s(L[\w/$]+);", text, re.M)
        return m.group(1)[1:].replace("/", ".") if m else ""
    m = re.search(r"^\s*package\s+([\w.]+)", text, re.M)
    return (m.group(1) + ".") if m else ""


class _Extractor:
    """Collects placements from one decompiled tree, file by file."""

    def __init__(self, app, catalog):
        self.catalog = catalog
        self.layouts = _layout_index(app.root)
        self.public_ids = _public_ids(app.root)
        self.seen_ids = set()
        self.scheme = AdIntegrationScheme()

    def bind_layout_id(self, network, id_name, where):
        if (network, id_name) in self.seen_ids:
            return None
        self.seen_ids.add((network, id_name))
        entry = self.catalog.entries[network]
        if id_name not in self.layouts:
            self.scheme.warnings.append(
                f"DanglingLayoutId: {where} looks up id {id_name!r} for {network}, "
                f"absent from all layouts; recorded as Banner")
            return AdFormat.BANNER
        tag, attrs = self.layouts[id_name]
        return _layout_format(entry, tag, attrs)

    def run(self, files, root):
        for path in files:
            text = _read_text(path)
            own = _file_package(text, path.suffix)
            if own and self.catalog.network_of(own):
                continue  # SDK code shipped inside the app
            rel = path.relative_to(root).as_posix() if root.is_dir() else path.name
            if path.suffix == ".smali":
                events = self._smali_events(text, rel)
            else:
                events = self._java_events(text, rel)
            for _pos, network, fmt in sorted(events, key=lambda e: e[0]):
                if fmt is not None:
                    self.scheme.placements.append(Placement(network, fmt))
        return self.scheme

    # smali (Apktool output)

    _SMALI_SGET = re.compile(r"sget-object\s+[vp]\d+,\s*L([\w/$]+);->([\w$]+):")
    _SMALI_NEW = re.compile(r"new-instance\s+[vp]\d+,\s*L([\w/$]+);")
    _SMALI_ID_FIELD = re.compile(r"sget\s+[vp]\d+,\s*L[\w/$]*R\$id;->([\w$]+):I")
    _SMALI_ID_CONST = re.compile(r"const(?:/high16|/16)?\s+[vp]\d+,\s*(0x7f[0-9a-fA-F]+)")
    _SMALI_CAST = re.compile(r"check-cast\s+[vp]\d+,\s*L([\w/$]+);")

    def _smali_events(self, text, rel):
        events = []
        for m in self._SMALI_SGET.finditer(text):
            dotted = m.group(1).replace("/", ".")
            fmt = self._constant(dotted, m.group(2))
            if fmt:
                events.append((m.start(), *fmt))
        for m in self._SMALI_NEW.finditer(text):
            dotted = m.group(1).replace("/", ".")
            fmt = self._constant(dotted.rsplit(".", 1)[0], dotted.rsplit(".", 1)[-1], dotted)
            if fmt:
                events.append((m.start(), *fmt))
        events.extend(self._smali_lookups(text, rel))
        return events

    def _smali_lookups(self, text, rel):
        """findViewById(id) followed by check-cast to an ad network type."""
        events = []
        id_name, stage = None, 0  # 1: id loaded, 2: looked up, 3: result moved
        offset = 0
        for raw in text.splitlines(keepends=True):
            pos = offset
            offset += len(raw)
            line = raw.strip()
            if not line or line.startswith(("#", ".line", ".local", ".param", ".prologue")):
                continue
            m = self._SMALI_ID_FIELD.match(line)
            if m:
                id_name, stage = m.group(1), 1
                continue
            m = self._SMALI_ID_CONST.match(line)
            if m:
                id_name = self.public_ids.get(int(m.group(1), 16))
                stage = 1 if id_name else 0
                continue
            if stage == 1 and "->findViewById(I)" in line:
                stage = 2
                continue
            if stage == 2 and line.startswith("move-result-object"):
                stage = 3
                continue
            m = self._SMALI_CAST.match(line)
            if stage == 3 and m:
                network = self.catalog.network_of(m.group(1).replace("/", "."))
                if network:
                    events.append((pos, network, self.bind_layout_id(network, id_name, rel)))
            id_name, stage = None, 0
        return events

    def _constant(self, owner_dotted, name, full_type=None):
        """(network, format) if `name` is a format constant of the owner's network."""
        network = self.catalog.network_of(full_type or owner_dotted + ".")
        if network is None:
            return None
        fmt = self.catalog.entries[network].format_constants.get(name)
        return (network, fmt) if fmt else None

    # java / kotlin (jadx-style sources)

    _IMPORT = re.compile(r"^\s*import\s+([\w.]+?)(\.\*)?\s*;?\s*$", re.M)
    _QUALIFIED = re.compile(r"((?:[A-Za-z_$][\w$]*\.)*[A-Za-z_$][\w$]*)\.([A-Za-z_$][\w$]*)\b(?!\s*\()")
    _NEW = re.compile(r"\bnew\s+((?:[A-Za-z_$][\w$]*\.)*[A-Za-z_$][\w$]*)\s*\(")
    _LOOKUP = re.compile(
        r"\(\s*([\w$.]+)\s*\)\s*(?:[\w$]+\s*\.\s*)*findViewById\s*\(\s*(?:[\w$.]*\.)?R\.id\.(\w+)\s*\)"
        r"|findViewById\s*<\s*([\w$.]+)\s*>\s*\(\s*(?:[\w$.]*\.)?R\.id\.(\w+)\s*\)")

    def _java_events(self, text, rel):
        imports = {}
        wildcards = []
        for m in self._IMPORT.finditer(text):
            if m.group(2):
                wildcards.append(m.group(1) + ".")
            else:
                imports[m.group(1).rsplit(".", 1)[-1]] = m.group(1)
        body_start = max((m.end() for m in self._IMPORT.finditer(text)), default=0)

        def resolve(name):
            if "." in name:
                head, rest = name.split(".", 1)
                if head in imports:
                    return imports[head] + "." + rest
                return name
            if name in imports:
                return imports[name]
            for w in wildcards:
                if self.catalog.network_of(w):
                    return w + name
            return None

        events = []
        for m in self._QUALIFIED.finditer(text, body_start):
            # static member access needs a class owner; pkg.Type is a type name
            if not m.group(1).rsplit(".", 1)[-1][:1].isupper():
                continue
            owner = resolve(m.group(1))
            if owner:
                fmt = self._constant(owner, m.group(2), owner + "." + m.group(2))
                if fmt:
                    events.append((m.start(), *fmt))
        for m in self._NEW.finditer(text, body_start):
            full = resolve(m.group(1))
            if full:
                fmt = self._constant(full.rsplit(".", 1)[0], full.rsplit(".", 1)[-1], full)
                if fmt:
                    events.append((m.start(), *fmt))
        for m in self._LOOKUP.finditer(text, body_start):
            cast, id_name = (m.group(1), m.group(2)) if m.group(1) else (m.group(3), m.group(4))
            full = resolve(cast)
            network = self.catalog.network_of(full) if full else None
            if network:
                events.append((m.start(), network, self.bind_layout_id(network, id_name, rel)))
        return events


def extract_ad_formats(app, catalog):
    """Resolve every ad placement (network, format) declared by a decompiled tree."""
    if app.kind is not InputKind.DECOMPILED_TREE:
        raise UnsupportedInputKind("ad formats are only recoverable from a decompiled tree")
    app.validate()
    scheme = _Extractor(app, catalog).run(_code_files(app.root), app.root)
    for w in scheme.warnings:
        log.warning("%s: %s", app.root, w)
    return scheme
