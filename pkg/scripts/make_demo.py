"""Regenerate the frozen demo workspace inputs under demo/.

Writes the twelve miniature decompiled app trees (one per ad integration
scheme A1-A12), the synthetic review corpus, the app -> scheme map and the
twelve-scheme observation fixture. Run from the repository root:

    python scripts/make_demo.py
"""

import json
import math
import random
import shutil
import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parents[1]
DEMO = ROOT / "demo"

MANIFEST = """<?xml version="1.0" encoding="utf-8"?>
<manifest xmlns:android="http://schemas.android.com/apk/res/android" package="{pkg}">
    <application android:label="{name}">
        <activity android:name=".MainActivity"/>
        <activity android:name=".SecondActivity"/>
    </application>
</manifest>
"""

LAYOUT = """<?xml version="1.0" encoding="utf-8"?>
<LinearLayout xmlns:android="http://schemas.android.com/apk/res/android"
    xmlns:ads="http://schemas.android.com/apk/res-auto"
    android:layout_width="match_parent"
    android:layout_height="match_parent"
    android:orientation="vertical">
    <Button android:id="@+id/nextButton"
        android:layout_width="wrap_content"
        android:layout_height="wrap_content"/>
{views}
</LinearLayout>
"""

SMALI_HEAD = """.class public L{cls};
.super Landroid/app/Activity;
.source "{src}"


# virtual methods
.method protected onCreate(Landroid/os/Bundle;)V
    .locals 3
    .param p1, "savedInstanceState"    # Landroid/os/Bundle;

    .prologue
    invoke-super {{p0, p1}}, Landroid/app/Activity;->onCreate(Landroid/os/Bundle;)V

    const/high16 v0, 0x7f030000

    invoke-virtual {{p0, v0}}, L{cls};->setContentView(I)V
"""

SMALI_TAIL = """
    return-void
.end method
"""

SNIPPETS = {
    # smali, static format constant
    "smali_admob_const": """
    new-instance v0, Lcom/google/android/gms/ads/AdView;

    invoke-direct {{v0, p0}}, Lcom/google/android/gms/ads/AdView;-><init>(Landroid/content/Context;)V

    sget-object v1, Lcom/google/android/gms/ads/AdSize;->{const}:Lcom/google/android/gms/ads/AdSize;

    invoke-virtual {{v0, v1}}, Lcom/google/android/gms/ads/AdView;->setAdSize(Lcom/google/android/gms/ads/AdSize;)V
""",
    # smali, instantiated ad class
    "smali_new": """
    new-instance v2, L{cls};

    invoke-direct {{v2, p0}}, L{cls};-><init>(Landroid/content/Context;)V

    iput-object v2, p0, L{owner};->ad{n}:L{cls};
""",
    # smali, view looked up by R$id field and cast to the ad view type
    "smali_lookup_field": """
    sget v0, L{pkgpath}/R$id;->{view_id}:I

    invoke-virtual {{p0, v0}}, L{owner};->findViewById(I)Landroid/view/View;

    move-result-object v0

    check-cast v0, L{cls};

    iput-object v0, p0, L{owner};->banner{n}:L{cls};
""",
    # smali, view looked up by numeric resource id
    "smali_lookup_const": """
    const v0, {numeric}

    invoke-virtual {{p0, v0}}, L{owner};->findViewById(I)Landroid/view/View;

    move-result-object v0

    check-cast v0, L{cls};
""",
}

# SDK classes shipped inside the app; must not be mistaken for app placements
SDK_STUBS = {
    "AdMob": ("com/google/android/gms/ads/AdView", """.class public Lcom/google/android/gms/ads/AdView;
.super Landroid/view/ViewGroup;

.method public setDefaults()V
    .locals 1
    sget-object v0, Lcom/google/android/gms/ads/AdSize;->BANNER:Lcom/google/android/gms/ads/AdSize;
    return-void
.end method
"""),
    "MoPub": ("com/mopub/mobileads/MoPubView", """.class public Lcom/mopub/mobileads/MoPubView;
.super Landroid/widget/FrameLayout;

.method private preload()V
    .locals 1
    new-instance v0, Lcom/mopub/mobileads/MoPubInterstitial;
    return-void
.end method
"""),
    "Amazon": ("com/amazon/device/ads/AdLayout", """.class public Lcom/amazon/device/ads/AdLayout;
.super Landroid/widget/FrameLayout;
"""),
    "InMobi": ("com/inmobi/ads/InMobiBanner", """.class public final Lcom/inmobi/ads/InMobiBanner;
.super Landroid/widget/RelativeLayout;
"""),
}


def java_activity(pkg, cls_name, imports, body, fields=""):
    imp = "".join(f"import {i};\n" for i in ["android.app.Activity", "android.os.Bundle", *imports])
    return (f"package {pkg};\n\n{imp}\npublic class {cls_name} extends Activity {{\n{fields}"
            f"    @Override\n    protected void onCreate(Bundle savedInstanceState) {{\n"
            f"        super.onCreate(savedInstanceState);\n"
            f"        setContentView(R.layout.activity_{cls_name.replace('Activity', '').lower()});\n"
            f"{body}    }}\n}}\n")


def r_java(pkg, ids):
    lines = "".join(f"        public static final int {name} = 0x7f0b{i:04x};\n"
                    for i, name in enumerate(ids, start=1))
    return (f"package {pkg};\n\npublic final class R {{\n    public static final class id {{\n"
            f"{lines}    }}\n    public static final class layout {{\n"
            f"        public static final int activity_main = 0x7f030000;\n"
            f"        public static final int activity_second = 0x7f030001;\n    }}\n}}\n")


def view_xml(tag, view_id, size=None):
    size_attr = f'\n        ads:adSize="{size}"' if size else ""
    return (f'    <{tag} android:id="@+id/{view_id}"\n'
            f'        android:layout_width="wrap_content"\n'
            f'        android:layout_height="wrap_content"{size_attr}/>')


def write(path, text):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


class App:
    def __init__(self, scheme, networks):
        self.scheme = scheme
        n = scheme[1:]
        self.pkg = f"com.demo.scheme{n}"
        self.pkgpath = self.pkg.replace(".", "/")
        self.root = DEMO / "apps" / f"app_{scheme.lower()}"
        self.networks = networks
        self.layouts = {"activity_main": [], "activity_second": []}
        self.ids = ["nextButton"]
        self.smali = {}
        self.n = 0

    def smali_activity(self, name):
        cls = f"{self.pkgpath}/{name}"
        if name not in self.smali:
            self.smali[name] = SMALI_HEAD.format(cls=cls, src=f"{name}.java")
        return cls

    def add_smali(self, name, key, **kw):
        owner = self.smali_activity(name)
        self.n += 1
        self.smali[name] += SNIPPETS[key].format(owner=owner, pkgpath=self.pkgpath, n=self.n, **kw)

    def add_view(self, layout, tag, view_id, size=None):
        self.layouts[layout].append(view_xml(tag, view_id, size))
        self.ids.append(view_id)

    def finish(self, java_files=()):
        if self.root.exists():
            shutil.rmtree(self.root)
        write(self.root / "AndroidManifest.xml", MANIFEST.format(pkg=self.pkg, name=self.scheme))
        for name, views in self.layouts.items():
            write(self.root / "res" / "layout" / f"{name}.xml", LAYOUT.format(views="\n".join(views)))
        publics = "".join(f'    <public type="id" name="{n}" id="0x7f0b{i:04x}" />\n'
                          for i, n in enumerate(self.ids, start=1))
        write(self.root / "res" / "values" / "public.xml",
              f'<?xml version="1.0" encoding="utf-8"?>\n<resources>\n{publics}</resources>\n')
        for name, text in self.smali.items():
            write(self.root / "smali" / self.pkgpath / f"{name}.smali", text + SMALI_TAIL)
        for rel, text in java_files:
            write(self.root / "sources" / self.pkgpath / rel, text)
        write(self.root / "sources" / self.pkgpath / "R.java", r_java(self.pkg, self.ids))
        for net in self.networks:
            path, text = SDK_STUBS[net]
            write(self.root / "smali" / f"{path}.smali", text)

    def numeric_id(self, view_id):
        return f"0x7f0b{self.ids.index(view_id) + 1:04x}"


ADMOB_IMPORTS = ["com.google.android.gms.ads.AdRequest", "com.google.android.gms.ads.AdSize",
                 "com.google.android.gms.ads.AdView"]


def build_apps():
    apps = []

    a = App("A1", ["AdMob"])
    a.finish([("MainActivity.java", java_activity(a.pkg, "MainActivity", ADMOB_IMPORTS,
        "        AdView adView = new AdView(this);\n"
        "        adView.setAdSize(AdSize.BANNER);\n"
        "        adView.setAdUnitId(\"ca-app-pub-0000000000000000/0000000000\");\n"
        "        adView.loadAd(new AdRequest.Builder().build());\n"))])
    apps.append(a)

    a = App("A2", ["AdMob"])
    a.add_smali("MainActivity", "smali_admob_const", const="BANNER")
    a.add_smali("SecondActivity", "smali_new", cls="com/google/android/gms/ads/InterstitialAd")
    a.finish()
    apps.append(a)

    a = App("A3", ["AdMob"])
    a.add_view("activity_main", "com.google.android.gms.ads.AdView", "adView", "SMART_BANNER")
    a.finish([("MainActivity.java", java_activity(a.pkg, "MainActivity", ADMOB_IMPORTS,
        "        AdView adView = (AdView) findViewById(R.id.adView);\n"
        "        adView.loadAd(new AdRequest.Builder().build());\n"))])
    apps.append(a)

    a = App("A4", ["AdMob"])
    a.add_view("activity_main", "com.google.android.gms.ads.AdView", "smartBanner", "SMART_BANNER")
    a.add_smali("MainActivity", "smali_lookup_const", numeric=a.numeric_id("smartBanner"),
                cls="com/google/android/gms/ads/AdView")
    a.finish([("SecondActivity.java", java_activity(a.pkg, "SecondActivity",
        ["com.google.android.gms.ads.AdRequest", "com.google.android.gms.ads.InterstitialAd"],
        "        interstitial = new InterstitialAd(this);\n"
        "        interstitial.loadAd(new AdRequest.Builder().build());\n",
        fields="    private InterstitialAd interstitial;\n\n"))])
    apps.append(a)

    a = App("A5", ["Amazon"])
    a.add_smali("MainActivity", "smali_new", cls="com/amazon/device/ads/AdLayout")
    a.finish()
    apps.append(a)

    a = App("A6", ["MoPub"])
    a.add_view("activity_main", "com.mopub.mobileads.MoPubView", "mopubBanner")
    a.finish([("MainActivity.java", java_activity(a.pkg, "MainActivity",
        ["com.mopub.mobileads.MoPubInterstitial", "com.mopub.mobileads.MoPubView"],
        "        MoPubView banner = (MoPubView) findViewById(R.id.mopubBanner);\n"
        "        banner.loadAd();\n"
        "        MoPubInterstitial interstitial = new MoPubInterstitial(this, \"unit\");\n"
        "        interstitial.load();\n"))])
    apps.append(a)

    a = App("A7", ["MoPub", "Amazon"])
    a.add_view("activity_main", "com.mopub.mobileads.MoPubView", "mopubBanner")
    a.add_view("activity_second", "com.amazon.device.ads.AdLayout", "amazonBanner")
    a.add_smali("MainActivity", "smali_lookup_field", view_id="mopubBanner",
                cls="com/mopub/mobileads/MoPubView")
    a.add_smali("MainActivity", "smali_new", cls="com/mopub/mobileads/MoPubInterstitial")
    a.finish([("SecondActivity.java",
               f"package {a.pkg};\n\nimport android.app.Activity;\nimport android.os.Bundle;\n"
               "import com.amazon.device.ads.*;\n\n"
               "public class SecondActivity extends Activity {\n"
               "    @Override\n    protected void onCreate(Bundle savedInstanceState) {\n"
               "        super.onCreate(savedInstanceState);\n"
               "        setContentView(R.layout.activity_second);\n"
               "        AdLayout banner = (AdLayout) findViewById(R.id.amazonBanner);\n"
               "        banner.loadAd();\n"
               "        InterstitialAd interstitial = new InterstitialAd(this);\n"
               "        interstitial.loadAd();\n    }\n}\n")])
    apps.append(a)

    a = App("A8", ["AdMob"])
    a.add_smali("MainActivity", "smali_admob_const", const="FULL_BANNER")
    a.finish()
    apps.append(a)

    a = App("A9", ["MoPub"])
    a.add_view("activity_main", "com.mopub.mobileads.MoPubView", "mopubBanner")
    a.add_smali("MainActivity", "smali_lookup_field", view_id="mopubBanner",
                cls="com/mopub/mobileads/MoPubView")
    a.finish()
    apps.append(a)

    a = App("A10", ["AdMob"])
    a.finish([("MainActivity.java", java_activity(a.pkg, "MainActivity",
        ["com.google.android.gms.ads.AdRequest"],
        "        com.google.android.gms.ads.InterstitialAd ad =\n"
        "                new com.google.android.gms.ads.InterstitialAd(this);\n"
        "        ad.loadAd(new AdRequest.Builder().build());\n"))])
    apps.append(a)

    a = App("A11", ["AdMob", "MoPub"])
    a.add_view("activity_second", "com.mopub.mobileads.MoPubView", "mopubBanner")
    a.finish([
        ("MainActivity.java", java_activity(a.pkg, "MainActivity", ADMOB_IMPORTS,
            "        AdView adView = new AdView(this);\n"
            "        adView.setAdSize(AdSize.SMART_BANNER);\n")),
        ("SecondActivity.kt",
         f"package {a.pkg}\n\nimport android.app.Activity\nimport android.os.Bundle\n"
         "import com.mopub.mobileads.MoPubView\n\n"
         "class SecondActivity : Activity() {\n"
         "    override fun onCreate(savedInstanceState: Bundle?) {\n"
         "        super.onCreate(savedInstanceState)\n"
         "        setContentView(R.layout.activity_second)\n"
         "        val banner = findViewById<MoPubView>(R.id.mopubBanner)\n"
         "        banner.loadAd()\n    }\n}\n"),
    ])
    apps.append(a)

    a = App("A12", ["AdMob", "InMobi"])
    a.add_smali("MainActivity", "smali_admob_const", const="SMART_BANNER")
    a.finish([("SecondActivity.java", java_activity(a.pkg, "SecondActivity",
        ["com.inmobi.ads.InMobiBanner"],
        "        InMobiBanner banner = new InMobiBanner(this, 1471550843414L);\n"
        "        banner.load();\n"))])
    apps.append(a)
    return apps


# review corpus ------------------------------------------------------------

COMPLAINTS = {
    "NumAds": ["So many ads, every screen has one", "Way too much ads since the update",
               "Free version is unusable, a lot of ads everywhere",
               "I would buy the paid app but the free app spams ads"],
    "MemCpu": ["Memory hog once the ad banner loads", "Gets slow and laggy when ads show",
               "The app hangs while an advert is loading", "Ads make it lagging and cpu heavy"],
    "Traffic": ["Ads burn my data rate even without wifi", "Eats network bandwidth just for ads",
                "Advertising uses the network all the time"],
    "Battery": ["Battery drain from these ads is terrible", "Ads drain power in the background",
                "Need to recharge twice a day, blame the ads"],
}
NEUTRAL = ["Great app, love it", "Works fine for me", "Nice layout and easy to use",
           "Ads are ok, the app is useful", "Solid tool, does the job",
           "Good but the ad at the bottom is annoying", "Tried uninstalling because of the ads",
           "Premium version is worth it, no ads", "Home screen widget is handy"]

# per-scheme complaint propensity and how harsh the complaints are (mean of 1 vs 2 stars)
SCHEME_PROFILE = {
    "A1": (0.30, 0.35), "A2": (0.35, 0.30), "A3": (0.20, 0.45), "A4": (0.30, 0.40),
    "A5": (0.20, 0.50), "A6": (0.55, 0.10), "A7": (0.60, 0.15), "A8": (0.25, 0.40),
    "A9": (0.45, 0.25), "A10": (0.30, 0.35), "A11": (0.50, 0.20), "A12": (0.50, 0.15),
}


def build_reviews(apps, rng):
    rows = []
    for a in apps:
        p_complain, p_two = SCHEME_PROFILE[a.scheme]
        for i in range(40):
            month = 1 + (i % 12)
            day = 1 + (i * 7) % 28
            date = f"2016-{month:02d}-{day:02d}"
            if rng.random() < p_complain:
                cost = rng.choice(sorted(COMPLAINTS))
                text = rng.choice(COMPLAINTS[cost])
                rating = 2 if rng.random() < p_two else 1
                if rng.random() < 0.15:
                    rating = 3   # complaint without a low rating: ignored by the cutoff
            else:
                text = rng.choice(NEUTRAL)
                rating = rng.choice([3, 4, 4, 5, 5, 5])
            rows.append({"app_id": a.pkg, "rating": rating, "date": date, "text": text})
    return rows


# twelve-scheme observation fixture ---------------------------------------

TARGETS = {"NumAds": -0.313, "MemCpu": -0.621, "Traffic": 0.081, "Battery": -0.511}
SCHEMES = [f"A{i}" for i in range(1, 13)]
MEASURED = {
    "NumAds": [1, 2, 1, 2, 1, 2, 4, 1, 1, 1, 2, 2],
    "MemCpu": [2.26, 4.1, 2.42, 5.3, 1.2, 31.5, 68.6, 2.0, 24.8, 3.4, 35.7, 6.2],
    "Traffic": [520113, 812400, 730552, 896926, 101220, 240310, 355870, 410200, 130560,
                620140, 388020, 905300],
    "Battery": [6.1, 9.3, 5.4, 10.2, 1.5, 40.52, 44.55, 4.9, 22.54, 8.7, 46.12, 12.5],
}


def _pearson(x, y):
    x, y = np.asarray(x, float), np.asarray(y, float)
    dx, dy = x - x.mean(), y - y.mean()
    return float((dx * dy).sum() / math.sqrt((dx * dx).sum() * (dy * dy).sum()))


def ratings_with_correlation(x, r, seed):
    """Ratings in [1, 2] (3 decimals) whose correlation with x rounds to r."""
    x = np.asarray(x, float)
    n = len(x)
    z = x - x.mean()
    z /= np.linalg.norm(z)
    gen = np.random.default_rng(seed)
    for _ in range(1000):
        w = gen.standard_normal(n)
        w -= w.mean()
        w -= (w @ z) * z
        w /= np.linalg.norm(w)
        y = r * z + math.sqrt(1 - r * r) * w
        ratings = np.round(1 + (y - y.min()) / (y.max() - y.min()), 3)
        if round(_pearson(x, ratings), 3) == r:
            return ratings
    raise RuntimeError("no rating vector found")


def build_fixture():
    lines = ["scheme,cost_type,measured,rating"]
    for k, (cost, target) in enumerate(TARGETS.items()):
        ratings = ratings_with_correlation(MEASURED[cost], target, seed=100 + k)
        for s, m, r in zip(SCHEMES, MEASURED[cost], ratings):
            lines.append(f"{s},{cost},{m},{r:.3f}")
    return "\n".join(lines) + "\n"


def main():
    apps = build_apps()
    write(DEMO / "app_schemes.json",
          json.dumps({a.pkg: a.scheme for a in apps}, indent=2) + "\n")
    rng = random.Random(2016)
    reviews = build_reviews(apps, rng)
    write(DEMO / "reviews.jsonl", "".join(json.dumps(r) + "\n" for r in reviews))
    write(DEMO / "correlation_fixture.csv", build_fixture())
    print(f"wrote {len(apps)} apps, {len(reviews)} reviews", file=sys.stderr)


if __name__ == "__main__":
    main()
